//! Fermion bilinears `Σ c c†_a c_b + const` applied matrix-free to sparse
//! Fock vectors.

use std::collections::BTreeMap;

use super::space::FermionFockSpace;
use crate::error::{Error, Result};
use crate::linalg::{SparseOperator, C64};

/// Sparse state vector keyed by occupation bitstring.
pub type FockVector = BTreeMap<u64, C64>;

/// Mode label `(n, flavor)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub n: i32,
    pub flavor: usize,
}

impl Mode {
    pub fn new(n: i32, flavor: usize) -> Self {
        Self { n, flavor }
    }
}

/// `c†_a c_b` on a bitstring: `None` if it annihilates the state.
pub fn hop(bits: u64, create: u32, annihilate: u32) -> Option<(u64, f64)> {
    if bits >> annihilate & 1 == 0 {
        return None;
    }
    let below = |b: u64, k: u32| (b & ((1u64 << k) - 1)).count_ones();
    let mut sign = if below(bits, annihilate) % 2 == 0 { 1.0 } else { -1.0 };
    let mid = bits & !(1u64 << annihilate);
    if mid >> create & 1 == 1 {
        return None;
    }
    if below(mid, create) % 2 == 1 {
        sign = -sign;
    }
    Some((mid | 1u64 << create, sign))
}

/// Linear combination of `c†_a c_b` plus a multiple of the identity.
#[derive(Clone, Debug, Default)]
pub struct Bilinear {
    terms: Vec<(C64, u32, u32)>,
    constant: C64,
}

impl Bilinear {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &[(C64, u32, u32)] {
        &self.terms
    }

    pub fn constant(&self) -> C64 {
        self.constant
    }

    pub fn add_constant(&mut self, c: C64) {
        self.constant += c;
    }

    /// Append `coef · c†_create c_annihilate`; terms leaving the window are
    /// dropped.
    pub fn push(&mut self, space: &FermionFockSpace, coef: C64, create: Mode, annihilate: Mode) {
        if let (Some(a), Some(b)) = (space.bit(create.n, create.flavor), space.bit(annihilate.n, annihilate.flavor)) {
            self.terms.push((coef, a, b));
        }
    }

    /// As [`push`](Self::push) but normal ordered with respect to the Fermi
    /// sea: diagonal terms on `n ≤ 0` subtract their sea value.
    pub fn push_normal_ordered(&mut self, space: &FermionFockSpace, coef: C64, create: Mode, annihilate: Mode) {
        if create == annihilate && create.n <= 0 && space.window().contains(create.n) {
            self.constant -= coef;
        }
        self.push(space, coef, create, annihilate);
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            terms: self.terms.iter().map(|&(c, a, b)| (c * s, a, b)).collect(),
            constant: self.constant * s,
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|&(c, a, b)| (c.conj(), b, a)).collect(),
            constant: self.constant.conj(),
        }
    }

    pub fn plus(mut self, other: &Self) -> Self {
        self.terms.extend_from_slice(&other.terms);
        self.constant += other.constant;
        self
    }

    /// Image of one basis bitstring.
    pub fn apply_bits(&self, bits: u64, amp: C64, out: &mut FockVector) {
        if self.constant != C64::from(0.0) {
            *out.entry(bits).or_default() += self.constant * amp;
        }
        for &(c, a, b) in &self.terms {
            if let Some((img, sign)) = hop(bits, a, b) {
                *out.entry(img).or_default() += c * amp * sign;
            }
        }
    }

    pub fn apply(&self, v: &FockVector) -> FockVector {
        let mut out = FockVector::new();
        for (&bits, &amp) in v {
            self.apply_bits(bits, amp, &mut out);
        }
        out
    }

    /// Projection onto the basis of `space`: images leaving the basis are
    /// discarded.
    pub fn to_sparse(&self, space: &FermionFockSpace) -> SparseOperator {
        let mut triplets = Vec::new();
        for (col, &bits) in space.states().iter().enumerate() {
            let mut img = FockVector::new();
            self.apply_bits(bits, C64::from(1.0), &mut img);
            for (b, v) in img {
                if let Some(row) = space.index_of(b) {
                    triplets.push((row, col, v));
                }
            }
        }
        SparseOperator::from_triplets(space.dim(), triplets)
    }
}

pub fn basis_vector(bits: u64) -> FockVector {
    FockVector::from([(bits, C64::from(1.0))])
}

/// `a − b`.
pub fn difference(a: &FockVector, b: &FockVector) -> FockVector {
    let mut out = a.clone();
    for (&k, &v) in b {
        *out.entry(k).or_default() -= v;
    }
    out
}

pub fn axpy(out: &mut FockVector, s: C64, x: &FockVector) {
    for (&k, &v) in x {
        *out.entry(k).or_default() += s * v;
    }
}

pub fn fock_norm(v: &FockVector) -> f64 {
    v.values().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Density mode `b†_k` (`dagger`) or `b_k` of one flavor, `k = 2πn_k/L`:
/// `b†_k = (i/√n_k) Σ_p c†_{p+k} c_p`.
pub fn boson_bilinear(space: &FermionFockSpace, n_k: i32, flavor: usize, dagger: bool) -> Result<Bilinear> {
    if n_k <= 0 {
        return Err(Error::InvalidParameter(format!("boson index must be positive, got {n_k}")));
    }
    if flavor >= space.flavors() {
        return Err(Error::InvalidParameter(format!("flavor {flavor} out of range")));
    }
    let w = *space.window();
    let amp = C64::new(0.0, 1.0 / (n_k as f64).sqrt());
    let mut op = Bilinear::new();
    for n in w.modes() {
        if w.contains(n + n_k) {
            op.push(space, amp, Mode::new(n + n_k, flavor), Mode::new(n, flavor));
        }
    }
    Ok(if dagger { op } else { op.adjoint() })
}

/// Normal-ordered number operator of one flavor.
pub fn number_bilinear(space: &FermionFockSpace, flavor: usize) -> Bilinear {
    let mut op = Bilinear::new();
    for n in space.window().modes() {
        let m = Mode::new(n, flavor);
        op.push_normal_ordered(space, C64::from(1.0), m, m);
    }
    op
}

/// `(b_k, b†_k)` projected onto the basis.
pub fn boson_mode(space: &FermionFockSpace, n_k: i32, flavor: usize) -> Result<(SparseOperator, SparseOperator)> {
    let b = boson_bilinear(space, n_k, flavor, false)?;
    Ok((b.to_sparse(space), b.adjoint().to_sparse(space)))
}
