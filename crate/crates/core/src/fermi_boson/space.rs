//! Truncated chiral-fermion Fock spaces over a momentum window.
//!
//! Modes are ordered by slot (momentum index `n`, ascending) and then by
//! flavor; bit `slot * flavors + flavor` of a basis bitstring is the
//! occupation of that mode. Fermionic signs count occupied modes of lower
//! bit index.

use std::collections::HashMap;
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Slots `n_min..=n_max` with momentum `p = 2πn/L`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentumWindow {
    n_min: i32,
    n_max: i32,
    length: f64,
}

/// Default limit on `slots × flavors` for enumerating a full or fixed-charge
/// basis.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// Bitstrings are `u64`.
pub const MAX_MODES: usize = 64;

impl MomentumWindow {
    pub fn new(n_min: i32, n_max: i32, length: f64) -> Result<Self> {
        if !(n_min < 0 && n_max > 0) {
            return Err(Error::InvalidParameter(format!(
                "window must satisfy n_min < 0 < n_max, got [{n_min}, {n_max}]"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidParameter(format!("length must be positive, got {length}")));
        }
        let w = Self { n_min, n_max, length };
        if w.slots() > MAX_MODES {
            return Err(Error::CapExceeded { dim: w.slots(), cap: MAX_MODES });
        }
        Ok(w)
    }

    /// Window `[−m, m]`.
    pub fn symmetric(m: i32, length: f64) -> Result<Self> {
        Self::new(-m, m, length)
    }

    pub fn n_min(&self) -> i32 {
        self.n_min
    }

    pub fn n_max(&self) -> i32 {
        self.n_max
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn slots(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }

    /// Largest boson index `n_max − n_min`.
    pub fn span(&self) -> i32 {
        self.n_max - self.n_min
    }

    pub fn momentum(&self, n: i32) -> f64 {
        TAU * n as f64 / self.length
    }

    pub fn contains(&self, n: i32) -> bool {
        (self.n_min..=self.n_max).contains(&n)
    }

    pub fn slot(&self, n: i32) -> Option<usize> {
        self.contains(n).then(|| (n - self.n_min) as usize)
    }

    pub fn modes(&self) -> impl Iterator<Item = i32> {
        self.n_min..=self.n_max
    }
}

/// Which bitstrings make up the basis.
#[derive(Clone, Debug, PartialEq)]
pub enum BasisSelection {
    /// All `2^(slots·flavors)` bitstrings.
    Full,
    /// All bitstrings with this total (normal-ordered) charge.
    FixedCharge(i32),
    /// States whose per-flavor charges lie in `charges` and whose total
    /// excitation energy above the per-flavor charge ground state is at
    /// most `max_excitation` (in units of `2π v_F / L`).
    LowEnergy { charges: Vec<i32>, max_excitation: u32 },
}

/// Fock space over a momentum window with `flavors ∈ {1, 3}`.
#[derive(Clone, Debug)]
pub struct FermionFockSpace {
    window: MomentumWindow,
    flavors: usize,
    states: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl FermionFockSpace {
    pub fn build(window: MomentumWindow, flavors: usize, selection: BasisSelection) -> Result<Self> {
        Self::build_with_cap(window, flavors, selection, DEFAULT_ENUMERATION_CAP)
    }

    pub fn build_with_cap(
        window: MomentumWindow,
        flavors: usize,
        selection: BasisSelection,
        cap: usize,
    ) -> Result<Self> {
        if flavors != 1 && flavors != 3 {
            return Err(Error::InvalidParameter(format!("flavors must be 1 or 3, got {flavors}")));
        }
        let modes = window.slots() * flavors;
        if modes > MAX_MODES {
            return Err(Error::CapExceeded { dim: modes, cap: MAX_MODES });
        }
        let mut space = Self { window, flavors, states: Vec::new(), index: HashMap::new() };
        let mut states = match selection {
            BasisSelection::Full | BasisSelection::FixedCharge(_) if modes > cap => {
                return Err(Error::CapExceeded { dim: modes, cap });
            }
            BasisSelection::Full => (0..(1u64 << modes)).collect(),
            BasisSelection::FixedCharge(q) => {
                let particles = q + space.fermi_sea().count_ones() as i32;
                if particles < 0 || particles as usize > modes {
                    Vec::new()
                } else {
                    combinations(modes, particles as usize)
                }
            }
            BasisSelection::LowEnergy { charges, max_excitation } => {
                space.low_energy_states(&charges, max_excitation)
            }
        };
        states.sort_unstable();
        states.dedup();
        space.index = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        space.states = states;
        Ok(space)
    }

    pub fn window(&self) -> &MomentumWindow {
        &self.window
    }

    pub fn flavors(&self) -> usize {
        self.flavors
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn index_of(&self, bits: u64) -> Option<usize> {
        self.index.get(&bits).copied()
    }

    pub fn mode_count(&self) -> usize {
        self.window.slots() * self.flavors
    }

    /// Bit position of mode `(n, flavor)`; `None` outside the window.
    pub fn bit(&self, n: i32, flavor: usize) -> Option<u32> {
        debug_assert!(flavor < self.flavors);
        self.window.slot(n).map(|s| (s * self.flavors + flavor) as u32)
    }

    pub fn is_occupied(&self, bits: u64, n: i32, flavor: usize) -> bool {
        self.bit(n, flavor).is_some_and(|b| bits >> b & 1 == 1)
    }

    /// Reference state: slots `n ≤ 0` filled, `n > 0` empty, every flavor.
    pub fn fermi_sea(&self) -> u64 {
        let mut bits = 0u64;
        for n in self.window.n_min..=0 {
            for f in 0..self.flavors {
                bits |= 1u64 << self.bit(n, f).expect("n in window");
            }
        }
        bits
    }

    /// Occupations of one flavor ordered by `n`.
    pub fn occupations(&self, bits: u64, flavor: usize) -> Vec<u8> {
        self.window.modes().map(|n| self.is_occupied(bits, n, flavor) as u8).collect()
    }

    /// Normal-ordered charge of one flavor.
    pub fn charge(&self, bits: u64, flavor: usize) -> i32 {
        self.window
            .modes()
            .map(|n| match (self.is_occupied(bits, n, flavor), n <= 0) {
                (true, false) => 1,
                (false, true) => -1,
                _ => 0,
            })
            .sum()
    }

    pub fn total_charge(&self, bits: u64) -> i32 {
        (0..self.flavors).map(|f| self.charge(bits, f)).sum()
    }

    /// Excitation energy of one flavor above its charge ground state, in
    /// units of `2π v_F / L`.
    pub fn flavor_excitation(&self, bits: u64, flavor: usize) -> i64 {
        let q = self.charge(bits, flavor);
        let occupied: i64 = self
            .window
            .modes()
            .filter(|&n| self.is_occupied(bits, n, flavor))
            .map(|n| n as i64)
            .sum();
        let ground: i64 = (self.window.n_min..=q).map(|n| n as i64).sum();
        occupied - ground
    }

    pub fn excitation(&self, bits: u64) -> i64 {
        (0..self.flavors).map(|f| self.flavor_excitation(bits, f)).sum()
    }

    fn low_energy_states(&self, charges: &[i32], max_excitation: u32) -> Vec<u64> {
        let per_flavor: Vec<(u64, u32)> = charges
            .iter()
            .flat_map(|&q| self.single_flavor_states(q, max_excitation))
            .collect();
        let mut out = vec![(0u64, 0u32)];
        for f in 0..self.flavors {
            let mut next = Vec::new();
            for &(bits, e) in &out {
                for &(fbits, fe) in &per_flavor {
                    if e + fe <= max_excitation {
                        next.push((bits | self.spread(fbits, f), e + fe));
                    }
                }
            }
            out = next;
        }
        out.into_iter().map(|(b, _)| b).collect()
    }

    /// Place a slot-indexed single-flavor bitstring onto flavor `f`.
    fn spread(&self, slot_bits: u64, flavor: usize) -> u64 {
        let mut bits = 0u64;
        for s in 0..self.window.slots() {
            if slot_bits >> s & 1 == 1 {
                bits |= 1u64 << (s * self.flavors + flavor);
            }
        }
        bits
    }

    /// Slot-indexed bitstrings of one flavor with charge `q` and excitation
    /// at most `max`, paired with their excitation.
    fn single_flavor_states(&self, q: i32, max: u32) -> Vec<(u64, u32)> {
        let w = &self.window;
        if q < w.n_min - 1 || q > w.n_max {
            return Vec::new();
        }
        let ground: u64 = (w.n_min..=q).fold(0, |acc, n| acc | 1u64 << w.slot(n).unwrap());
        // particle offsets d = n − q ≥ 1, hole offsets e = q + 1 − n ≥ 1;
        // excitation = Σd + Σe − r for r pairs
        let max_d = (w.n_max - q).max(0) as u32;
        let max_e = (q - w.n_min + 1).max(0) as u32;
        let mut out = Vec::new();
        let mut r = 0u32;
        while r * r <= max && r <= max_d && r <= max_e {
            let budget = max + r;
            for particles in bounded_subsets(max_d, r, budget.saturating_sub(r * (r + 1) / 2)) {
                let used: u32 = particles.iter().sum();
                for holes in bounded_subsets(max_e, r, budget - used) {
                    let e = used + holes.iter().sum::<u32>() - r;
                    let mut bits = ground;
                    for d in &particles {
                        bits |= 1u64 << w.slot(q + *d as i32).unwrap();
                    }
                    for h in &holes {
                        bits &= !(1u64 << w.slot(q + 1 - *h as i32).unwrap());
                    }
                    out.push((bits, e));
                }
            }
            r += 1;
        }
        out
    }
}

/// All `size`-element subsets of `1..=max_value` with sum at most `budget`.
fn bounded_subsets(max_value: u32, size: u32, budget: u32) -> Vec<Vec<u32>> {
    fn rec(start: u32, max_value: u32, left: u32, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        let mut v = start;
        // minimal completion: v + (v+1) + … over `left` terms
        while v <= max_value && left * v + left * (left - 1) / 2 <= budget {
            cur.push(v);
            rec(v + 1, max_value, left - 1, budget - v, cur, out);
            cur.pop();
            v += 1;
        }
    }
    let mut out = Vec::new();
    rec(1, max_value, size, budget, &mut Vec::new(), &mut out);
    out
}

/// All bitstrings over `n` bits with exactly `k` set.
fn combinations(n: usize, k: usize) -> Vec<u64> {
    if k == 0 {
        return vec![0];
    }
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut v: u64 = (1u64 << k) - 1;
    let limit: u128 = 1u128 << n;
    while (v as u128) < limit {
        out.push(v);
        // Gosper's hack
        let c = v & v.wrapping_neg();
        let r = v + c;
        if r == 0 {
            break;
        }
        v = (((r ^ v) >> 2) / c) | r;
    }
    out
}

/// Basis states whose lowest `margin` slots are filled and highest
/// `margin` slots empty in every flavor, optionally with bounded
/// excitation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValiditySector {
    pub margin: u32,
    pub max_excitation: Option<u32>,
}

impl ValiditySector {
    pub fn new(margin: u32) -> Self {
        Self { margin, max_excitation: None }
    }

    pub fn with_max_excitation(mut self, e: u32) -> Self {
        self.max_excitation = Some(e);
        self
    }

    pub fn contains(&self, space: &FermionFockSpace, bits: u64) -> bool {
        let w = space.window();
        let m = self.margin as i32;
        for f in 0..space.flavors() {
            for n in w.n_min()..(w.n_min() + m).min(w.n_max() + 1) {
                if !space.is_occupied(bits, n, f) {
                    return false;
                }
            }
            for n in (w.n_max() - m + 1).max(w.n_min())..=w.n_max() {
                if space.is_occupied(bits, n, f) {
                    return false;
                }
            }
        }
        match self.max_excitation {
            Some(e) => space.excitation(bits) <= e as i64,
            None => true,
        }
    }

    pub fn states(&self, space: &FermionFockSpace) -> Vec<u64> {
        space.states().iter().copied().filter(|&b| self.contains(space, b)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(a: i32, b: i32) -> MomentumWindow {
        MomentumWindow::new(a, b, TAU).unwrap()
    }

    #[test]
    fn window_validation() {
        assert!(MomentumWindow::new(0, 3, 1.0).is_err());
        assert!(MomentumWindow::new(-3, 0, 1.0).is_err());
        assert!(MomentumWindow::new(-3, 3, -1.0).is_err());
        assert!(MomentumWindow::new(-40, 40, 1.0).is_err());
        assert_eq!(window(-2, 2).slots(), 5);
    }

    #[test]
    fn full_dimensions() {
        let s = FermionFockSpace::build(window(-2, 2), 1, BasisSelection::Full).unwrap();
        assert_eq!(s.dim(), 32);
        let s = FermionFockSpace::build(window(-1, 1), 3, BasisSelection::Full).unwrap();
        assert_eq!(s.dim(), 512);
    }

    #[test]
    fn cap_is_enforced_for_enumeration() {
        let w = window(-12, 12);
        assert!(matches!(
            FermionFockSpace::build(w, 1, BasisSelection::Full),
            Err(Error::CapExceeded { dim: 25, cap: 24 })
        ));
        let low = BasisSelection::LowEnergy { charges: vec![0], max_excitation: 4 };
        assert!(FermionFockSpace::build(w, 1, low).is_ok());
    }

    #[test]
    fn fermi_sea_occupations() {
        let s = FermionFockSpace::build(window(-2, 2), 1, BasisSelection::Full).unwrap();
        assert_eq!(s.occupations(s.fermi_sea(), 0), vec![1, 1, 1, 0, 0]);
        assert_eq!(s.total_charge(s.fermi_sea()), 0);
        assert_eq!(s.excitation(s.fermi_sea()), 0);
    }

    #[test]
    fn fixed_charge_sector_size() {
        // 5 slots, 3 particles at charge 0
        let s = FermionFockSpace::build(window(-2, 2), 1, BasisSelection::FixedCharge(0)).unwrap();
        assert_eq!(s.dim(), 10);
        assert!(s.states().iter().all(|&b| s.total_charge(b) == 0));
    }

    #[test]
    fn low_energy_counts_are_partition_numbers() {
        // deep window: charge-0 states at excitation E are counted by p(E)
        let s = FermionFockSpace::build(
            window(-12, 12),
            1,
            BasisSelection::LowEnergy { charges: vec![0], max_excitation: 6 },
        )
        .unwrap();
        let mut counts = [0usize; 7];
        for &b in s.states() {
            counts[s.excitation(b) as usize] += 1;
        }
        assert_eq!(counts, [1, 1, 2, 3, 5, 7, 11]);
    }

    #[test]
    fn low_energy_matches_filtered_full_basis() {
        let w = window(-4, 4);
        let full = FermionFockSpace::build(w, 1, BasisSelection::Full).unwrap();
        let low = FermionFockSpace::build(
            w,
            1,
            BasisSelection::LowEnergy { charges: vec![-1, 0, 2], max_excitation: 5 },
        )
        .unwrap();
        let expected: Vec<u64> = full
            .states()
            .iter()
            .copied()
            .filter(|&b| [-1, 0, 2].contains(&full.charge(b, 0)) && full.excitation(b) <= 5)
            .collect();
        assert_eq!(low.states(), expected.as_slice());
    }

    #[test]
    fn three_flavor_low_energy_matches_filter() {
        let w = window(-1, 2);
        let full = FermionFockSpace::build(w, 3, BasisSelection::Full).unwrap();
        let low = FermionFockSpace::build(
            w,
            3,
            BasisSelection::LowEnergy { charges: vec![0, 1], max_excitation: 2 },
        )
        .unwrap();
        let expected: Vec<u64> = full
            .states()
            .iter()
            .copied()
            .filter(|&b| (0..3).all(|f| [0, 1].contains(&full.charge(b, f))) && full.excitation(b) <= 2)
            .collect();
        assert_eq!(low.states(), expected.as_slice());
    }

    #[test]
    fn fermi_sea_is_in_every_validity_sector() {
        let w = window(-5, 7);
        let s = FermionFockSpace::build(w, 1, BasisSelection::LowEnergy { charges: vec![0], max_excitation: 0 }).unwrap();
        for m in 0..=5 {
            assert!(ValiditySector::new(m).contains(&s, s.fermi_sea()), "margin {m}");
        }
        assert!(!ValiditySector::new(7).contains(&s, s.fermi_sea()));
    }
}
