//! Numerical certificates for the finite-window bosonisation identities.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use super::bilinear::{axpy, basis_vector, boson_bilinear, difference, fock_norm, Bilinear, FockVector, Mode};
use super::space::{FermionFockSpace, ValiditySector};
use crate::error::{Error, Result};
use crate::linalg::C64;

fn check_index(space: &FermionFockSpace, k: i32) -> Result<()> {
    let span = space.window().span();
    if k < 1 || k > span {
        return Err(Error::InvalidParameter(format!("boson index {k} outside 1..={span}")));
    }
    Ok(())
}

/// `‖(AB − BA − c)v‖` with `A`, `B` bilinears.
fn commutator_defect(a: &Bilinear, b: &Bilinear, c: f64, bits: u64) -> f64 {
    let v = basis_vector(bits);
    let ab = a.apply(&b.apply(&v));
    let ba = b.apply(&a.apply(&v));
    let mut d = difference(&ab, &ba);
    if c != 0.0 {
        axpy(&mut d, C64::from(-c), &v);
    }
    fock_norm(&d)
}

fn max_over<F>(states: &[u64], f: F) -> f64
where
    F: Fn(u64) -> f64 + Sync,
{
    states.par_iter().map(|&b| f(b)).reduce(|| 0.0, f64::max)
}

/// Max over sector states of `‖([b_k, b†_k′] − δ_kk′)ψ‖`, flavor 0.
pub fn commutator_residual(space: &FermionFockSpace, k: i32, k_prime: i32, sector: &ValiditySector) -> Result<f64> {
    check_index(space, k)?;
    check_index(space, k_prime)?;
    let b = boson_bilinear(space, k, 0, false)?;
    let bd = boson_bilinear(space, k_prime, 0, true)?;
    let delta = if k == k_prime { 1.0 } else { 0.0 };
    let states = sector.states(space);
    Ok(max_over(&states, |bits| commutator_defect(&b, &bd, delta, bits)))
}

/// Max over the whole basis of `‖[b_k, b_k′]ψ‖`, flavor 0.
pub fn lowering_commutator_residual(space: &FermionFockSpace, k: i32, k_prime: i32) -> Result<f64> {
    check_index(space, k)?;
    check_index(space, k_prime)?;
    let b1 = boson_bilinear(space, k, 0, false)?;
    let b2 = boson_bilinear(space, k_prime, 0, false)?;
    Ok(max_over(space.states(), |bits| commutator_defect(&b1, &b2, 0.0, bits)))
}

/// Max over the whole basis of `‖[b_{k,f}, b†_{k′,f′}]ψ‖` and
/// `‖[b_{k,f}, b_{k′,f′}]ψ‖` over distinct flavor pairs.
pub fn flavor_commutator_residual(space: &FermionFockSpace, k: i32, k_prime: i32) -> Result<f64> {
    check_index(space, k)?;
    check_index(space, k_prime)?;
    let mut worst: f64 = 0.0;
    for f in 0..space.flavors() {
        for g in (0..space.flavors()).filter(|&g| g != f) {
            let b = boson_bilinear(space, k, f, false)?;
            for dagger in [false, true] {
                let other = boson_bilinear(space, k_prime, g, dagger)?;
                worst = worst.max(max_over(space.states(), |bits| commutator_defect(&b, &other, 0.0, bits)));
            }
        }
    }
    Ok(worst)
}

/// Max over the basis of `‖[Op, N̂]ψ‖` for `b_k`, `b†_k` of every flavor.
pub fn number_conservation_residual(space: &FermionFockSpace, k: i32) -> Result<f64> {
    check_index(space, k)?;
    let mut worst: f64 = 0.0;
    for f in 0..space.flavors() {
        let mut n_total = Bilinear::new();
        for g in 0..space.flavors() {
            n_total = n_total.plus(&super::bilinear::number_bilinear(space, g));
        }
        for dagger in [false, true] {
            let op = boson_bilinear(space, k, f, dagger)?;
            worst = worst.max(max_over(space.states(), |bits| commutator_defect(&op, &n_total, 0.0, bits)));
        }
    }
    Ok(worst)
}

/// `‖([b_K, b†_K] − 1)|sea⟩‖` at the largest index `K = n_max − n_min`,
/// where the truncated window cannot support the identity.
pub fn breakdown_probe(space: &FermionFockSpace) -> Result<f64> {
    let k = space.window().span();
    let b = boson_bilinear(space, k, 0, false)?;
    let bd = boson_bilinear(space, k, 0, true)?;
    Ok(commutator_defect(&b, &bd, 1.0, space.fermi_sea()))
}

/// Regularised sea two-point function against its closed form.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TwoPointComparison {
    pub numeric: C64,
    pub analytic: C64,
    pub rel_err: f64,
}

/// `⟨sea|ψ†(x)ψ(0)|sea⟩` with mode weights `e^{−a|p|/2}`, computed from
/// fermion matrix elements, against `(2π/L)/(1 − e^{−2πi(x − ia)/L})`.
pub fn two_point_compare(space: &FermionFockSpace, x: f64, a: f64) -> Result<TwoPointComparison> {
    let w = *space.window();
    let l = w.length();
    if !(a > 0.0) || !(x.abs() < l / 2.0) {
        return Err(Error::InvalidParameter(format!("need a > 0 and |x| < L/2, got a = {a}, x = {x}")));
    }
    let sea = space.fermi_sea();
    let weight = |n: i32| (-a * w.momentum(n).abs() / 2.0).exp();
    let mut numeric = C64::from(0.0);
    for n in w.modes() {
        for m in w.modes() {
            let mut op = Bilinear::new();
            op.push(space, C64::from(1.0), Mode::new(n, 0), Mode::new(m, 0));
            let img = op.apply(&basis_vector(sea));
            if let Some(v) = img.get(&sea) {
                numeric += C64::from_polar(weight(n) * weight(m), w.momentum(n) * x) * v;
            }
        }
    }
    numeric *= TAU / l;
    let z = C64::new(x, -a);
    let analytic = C64::from(TAU / l) / (C64::from(1.0) - (C64::new(0.0, -TAU / l) * z).exp());
    let rel_err = (numeric - analytic).norm() / analytic.norm();
    Ok(TwoPointComparison { numeric, analytic, rel_err })
}

fn single_flavor(space: &FermionFockSpace) -> Result<()> {
    if space.flavors() != 1 {
        return Err(Error::Precondition("identity is checked on a single flavor".into()));
    }
    Ok(())
}

/// Sector states with at most three units of excitation.
fn density_states(space: &FermionFockSpace, sector: &ValiditySector) -> Vec<u64> {
    sector
        .states(space)
        .into_iter()
        .filter(|&b| space.excitation(b) <= 3)
        .collect()
}

/// `L_ferm = Σ_{p,p′} :c†_p c_p′:` and
/// `L_bos = Σ_k √n_k e^{−ka/2} i(b_k − b†_k) + N̂`.
pub fn density_operators(space: &FermionFockSpace, a: f64) -> Result<(Bilinear, Bilinear)> {
    let w = *space.window();
    let mut ferm = Bilinear::new();
    for n in w.modes() {
        for m in w.modes() {
            ferm.push_normal_ordered(space, C64::from(1.0), Mode::new(n, 0), Mode::new(m, 0));
        }
    }
    let mut bos = super::bilinear::number_bilinear(space, 0);
    for k in 1..=w.span() {
        let s = (k as f64).sqrt() * (-PI * k as f64 * a / w.length()).exp();
        let b = boson_bilinear(space, k, 0, false)?;
        let bd = b.adjoint();
        bos = bos.plus(&b.scaled(C64::new(0.0, s))).plus(&bd.scaled(C64::new(0.0, -s)));
    }
    Ok((ferm, bos))
}

/// Max `|⟨φ|L_ferm − L_bos|ψ⟩|` over sector states `φ, ψ` with at most
/// three units of excitation.
pub fn density_identity_residual(space: &FermionFockSpace, sector: &ValiditySector, a: f64) -> Result<f64> {
    single_flavor(space)?;
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!("a must be positive, got {a}")));
    }
    let (ferm, bos) = density_operators(space, a)?;
    let states = density_states(space, sector);
    let allowed: std::collections::HashSet<u64> = states.iter().copied().collect();
    Ok(max_over(&states, |bits| {
        let v = basis_vector(bits);
        let d = difference(&ferm.apply(&v), &bos.apply(&v));
        d.iter()
            .filter(|(b, _)| allowed.contains(b))
            .map(|(_, z)| z.norm())
            .fold(0.0, f64::max)
    }))
}

/// Charge polynomial fitted to `H_ferm − H_bos`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct KineticFit {
    pub residual: f64,
    /// Coefficient of `N̂²`.
    pub fitted_c: f64,
    /// Coefficient of `N̂`.
    pub fitted_c0: f64,
    pub constant: f64,
    pub samples: usize,
}

impl KineticFit {
    pub fn evaluate(&self, n: f64) -> f64 {
        self.fitted_c * n * n + self.fitted_c0 * n + self.constant
    }
}

/// `H_ferm = v_F Σ p :n_p:` and `H_bos = v_F Σ_k k b†_k b_k` applied to a
/// basis state; returns `(H_ferm − H_bos)ψ`.
fn kinetic_difference(space: &FermionFockSpace, bosons: &[(f64, Bilinear, Bilinear)], v_fermi: f64, bits: u64) -> FockVector {
    let w = space.window();
    let v = basis_vector(bits);
    let e_ferm: f64 = w
        .modes()
        .map(|n| {
            let occ = space.is_occupied(bits, n, 0) as i32 as f64;
            let sea = (n <= 0) as i32 as f64;
            v_fermi * w.momentum(n) * (occ - sea)
        })
        .sum();
    let mut out: FockVector = v.iter().map(|(&b, &z)| (b, z * e_ferm)).collect();
    for (k, b, bd) in bosons {
        let img = bd.apply(&b.apply(&v));
        axpy(&mut out, C64::from(-v_fermi * k), &img);
    }
    out
}

/// Least-squares fit of `H_ferm − H_bos = C N̂² + C0 N̂ + const` over the
/// sector; the residual is the largest `‖(D − poly(N))ψ‖`.
pub fn kinetic_identity_fit(space: &FermionFockSpace, sector: &ValiditySector, v_fermi: f64) -> Result<KineticFit> {
    single_flavor(space)?;
    let w = *space.window();
    let mut bosons = Vec::new();
    for k in 1..=w.span() {
        let b = boson_bilinear(space, k, 0, false)?;
        let bd = b.adjoint();
        bosons.push((w.momentum(k), b, bd));
    }
    let states = sector.states(space);
    if states.is_empty() {
        return Err(Error::Precondition("validity sector is empty".into()));
    }
    let images: Vec<(u64, FockVector)> = states
        .par_iter()
        .map(|&b| (b, kinetic_difference(space, &bosons, v_fermi, b)))
        .collect();

    let rows = images.len();
    let a = DMatrix::<f64>::from_fn(rows, 3, |r, c| {
        let n = space.total_charge(images[r].0) as f64;
        [n * n, n, 1.0][c]
    });
    let y = DVector::<f64>::from_fn(rows, |r, _| images[r].1.get(&images[r].0).map_or(0.0, |z| z.re));
    let coeffs = a
        .clone()
        .svd(true, true)
        .solve(&y, 1e-12)
        .map_err(|e| Error::Degenerate(e.to_string()))?;
    let mut fit = KineticFit {
        residual: 0.0,
        fitted_c: coeffs[0],
        fitted_c0: coeffs[1],
        constant: coeffs[2],
        samples: rows,
    };
    fit.residual = images
        .iter()
        .map(|(bits, img)| {
            let mut d = img.clone();
            let p = fit.evaluate(space.total_charge(*bits) as f64);
            axpy(&mut d, C64::from(-p), &basis_vector(*bits));
            fock_norm(&d)
        })
        .fold(0.0, f64::max);
    Ok(fit)
}
