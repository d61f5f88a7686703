//! Perturbative checks of the BKP and KP bilinear identities.
//!
//! Contour integrals become formal residues of Laurent series in `z` whose
//! coefficients are polynomials in two time families `t` and `t′`. Everything
//! is weight graded (`deg t_k = k`, `deg z = −1`), so truncating every factor
//! at joint weight `W` is exact for the residue, and all surviving z-powers lie
//! in `[−W, W]`; that window is enforced rather than assumed.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{usage, Result};
use crate::polyring::{var_weight, HbarSeries, LaurentZ, Monomial, Poly, PRIMED};
use crate::report::VerificationReport;
use crate::scalars::{rat, Coeff, HbarExponent, Rational};

/// Which time family a substitution acts on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    T,
    TPrime,
}

impl Family {
    fn owns(self, var: u32) -> bool {
        (var & PRIMED != 0) == (self == Family::TPrime)
    }
}

/// `p(t ± m[z⁻¹])` collected by powers of `z`.
#[derive(Clone, PartialEq, Debug)]
pub struct ShiftedSeries<C: Coeff> {
    pub series: LaurentZ<C>,
    pub family: Family,
    pub sign: i32,
    pub magnitude: u32,
}

/// Substitutes `t_k → t_k + sign·magnitude/(k z^k)` in every variable of
/// `family`, inside the z-window `[z_min, z_max]`.
pub fn shift_times<C: Coeff>(
    p: &Poly<C>,
    family: Family,
    sign: i32,
    magnitude: u32,
    window: (i64, i64),
) -> Result<ShiftedSeries<C>> {
    if sign.abs() != 1 || magnitude == 0 {
        return usage("shift_times: sign must be ±1 and magnitude positive");
    }
    let cap = p.weight_cap();
    let mut by_power: BTreeMap<i64, Poly<C>> = BTreeMap::new();
    for (m, c) in p.terms() {
        // (monomial, coefficient, z-power) after expanding each shifted factor
        let mut parts = vec![(Monomial::one(), Rational::from_integer(1.into()), 0i64)];
        for &(var, e) in m.exps() {
            if !family.owns(var) {
                for part in &mut parts {
                    part.0 = part.0.mul(&Monomial::var_pow(var, e));
                }
                continue;
            }
            let k = var_weight(var) as i64;
            let shift = rat(sign as i64 * magnitude as i64, k);
            let mut next = Vec::with_capacity(parts.len() * (e as usize + 1));
            for (pm, pc, pz) in &parts {
                let mut binom = Rational::from_integer(1.into());
                for j in 0..=e {
                    let factor = &binom * shift.pow(j as i32);
                    next.push((pm.mul(&Monomial::var_pow(var, e - j)), pc * factor, pz - k * j as i64));
                    binom = binom * Rational::from_integer((e - j).into()) / Rational::from_integer((j + 1).into());
                }
            }
            parts = next;
        }
        for (pm, pc, pz) in parts {
            by_power.entry(pz).or_insert_with(|| Poly::zero(cap)).add_term(pm, c.scale(&pc));
        }
    }
    let mut series = LaurentZ::zero(window.0, window.1, cap);
    for (z, q) in &by_power {
        series.add_term(*z, q)?;
    }
    Ok(ShiftedSeries { series, family, sign, magnitude })
}

/// `exp(Σ_{k odd ≤ cap} (t_k − t′_k) z^k)` as a Laurent series; its `z^m`
/// coefficient is the weight-`m` part of the exponential.
fn kernel<C: Coeff>(cap: u32, window: (i64, i64)) -> Result<LaurentZ<C>> {
    let mut xi = Poly::zero(cap);
    for k in (1..=cap).step_by(2) {
        xi.add_term(Monomial::var(k), C::one());
        xi.add_term(Monomial::var(k | PRIMED), C::one().neg_ref());
    }
    let e = xi.exp()?;
    let mut out = LaurentZ::zero(window.0, window.1, cap);
    for m in 0..=cap {
        out.add_term(m as i64, &e.component(m))?;
    }
    Ok(out)
}

/// The truncated ħ-components of `tau`, after checking the caps.
fn components<C: Coeff>(tau: &HbarSeries<C>, cap: u32) -> Result<Vec<(HbarExponent, Poly<C>)>> {
    if tau.weight_cap() < cap {
        return usage(format!("tau known to weight {} only, below the joint weight cap {cap}", tau.weight_cap()));
    }
    tau.components().map(|(e, p)| Ok((e, p.truncate(cap)?))).collect()
}

/// Every ħ-order reachable as a sum of two component exponents, within the
/// ħ-cap of the series, with the contributing index pairs.
fn pair_orders(exps: &[HbarExponent], hbar_cap: HbarExponent) -> BTreeMap<HbarExponent, Vec<(usize, usize)>> {
    let mut orders: BTreeMap<HbarExponent, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, a) in exps.iter().enumerate() {
        for (j, b) in exps.iter().enumerate() {
            if *a + *b <= hbar_cap {
                orders.entry(*a + *b).or_default().push((i, j));
            }
        }
    }
    orders
}

/// `(ħ-order, lhs, rhs)`.
type Sides<C> = (HbarExponent, Poly<C>, Poly<C>);

/// Per ħ-order sides of a bilinear identity: `lhs` is the
/// `z^residue_power` coefficient of `K·τ_a(t − s[z⁻¹])·τ_b(t′ + s[z⁻¹])`
/// summed over pairs, `rhs` is `Σ τ_a(t)τ_b(t′)`.
fn bilinear_sides<C: Coeff>(
    tau: &HbarSeries<C>,
    cap: u32,
    magnitude: u32,
    residue_power: i64,
    window: (i64, i64),
) -> Result<Vec<Sides<C>>> {
    let comps = components(tau, cap)?;
    let k = kernel::<C>(cap, window)?;
    let shifted: Vec<(LaurentZ<C>, LaurentZ<C>)> = comps
        .par_iter()
        .map(|(_, p)| {
            let s = shift_times(p, Family::T, -1, magnitude, window)?;
            let sp = shift_times(&p.prime(), Family::TPrime, 1, magnitude, window)?;
            Ok((k.mul(&s.series)?, sp.series))
        })
        .collect::<Result<_>>()?;
    let exps: Vec<HbarExponent> = comps.iter().map(|(e, _)| *e).collect();
    let orders: Vec<_> = pair_orders(&exps, tau.hbar_cap()).into_iter().collect();
    orders
        .par_iter()
        .map(|(order, pairs)| {
            let mut lhs = Poly::zero(cap);
            let mut rhs = Poly::zero(cap);
            for &(i, j) in pairs {
                let (ks, _) = &shifted[i];
                let (_, sp) = &shifted[j];
                for (z, p) in ks.terms() {
                    let q = sp.coeff(residue_power - z);
                    lhs.add_assign_truncated(&p.mul_truncated(&q, cap));
                }
                rhs.add_assign_truncated(&comps[i].1.mul_truncated(&comps[j].1.prime(), cap));
            }
            Ok((*order, lhs, rhs))
        })
        .collect()
}

fn window(cap: u32) -> (i64, i64) {
    (-(cap as i64), cap as i64)
}

/// `Res_z z⁻¹ e^{ξ(t−t′,z)} τ(t−2[z⁻¹]) τ(t′+2[z⁻¹]) = τ(t)τ(t′)` at every
/// ħ-order, as a two-family identity up to joint weight `cap`.
pub fn verify_hirota_bkp<C: Coeff>(tau: &HbarSeries<C>, cap: u32) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("hirota-bkp");
    report.param("joint_weight", cap).param("hbar_cap", tau.hbar_cap());
    for (order, lhs, rhs) in bilinear_sides(tau, cap, 2, 0, window(cap))? {
        report.check_poly(&format!("hbar^{order}"), &rhs, &lhs);
    }
    Ok(report)
}

/// `Res_z e^{ξ(t−t′,z)} τ(t−[z⁻¹]) τ(t′+[z⁻¹]) = 0` at every ħ-order up to
/// joint weight `cap`, with the even times set to zero. A tau-function that
/// does not depend on even times is untouched by their shifts.
pub fn verify_hirota_kp<C: Coeff>(tau: &HbarSeries<C>, cap: u32) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("hirota-kp");
    report.param("joint_weight", cap).param("hbar_cap", tau.hbar_cap());
    for (order, lhs, _) in bilinear_sides(tau, cap, 1, -1, window(cap))? {
        report.check_poly(&format!("hbar^{order}"), &Poly::zero(cap), &lhs);
    }
    Ok(report)
}
