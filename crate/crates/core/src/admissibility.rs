//! Numerical p-admissibility of ramification data.
//!
//! Two criteria are implemented:
//!
//! * the three-point criterion, a finite system of floor/ceiling
//!   inequalities over powers `p^m ≤ d` and subsets `S` of the three
//!   points; a violated pair `(m, S)` is reported as an
//!   [`InseparableWitness`];
//! * the chain criterion for `e_i < p`, which asks for intermediate
//!   indices `e'_2, .., e'_{r-2}` such that every consecutive triple
//!   `(e'_m, e_{m+1}, e'_{m+1})` satisfies the triangle inequality and
//!   has odd sum below `2p`; a solution is reported as a [`ChainWitness`].

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdmissibilityError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("need at least 3 ramification indices, got {0}")]
    TooFewPoints(usize),
    #[error("ramification index at position {0} is zero")]
    ZeroIndex(usize),
    #[error("index {index} at position {position} is divisible by p (wild)")]
    WildIndex { position: usize, index: u64 },
    #[error("sum of (e_i - 1) is odd; no genus-0 degree")]
    Parity,
    #[error("index {index} at position {position} exceeds the degree {degree}")]
    Triangle { position: usize, index: u64, degree: u64 },
    #[error("index {index} at position {position} is not below p")]
    NotBelowP { position: usize, index: u64 },
    #[error("three-point criterion needs exactly 3 indices, got {0}")]
    NotThreePoints(usize),
    #[error("invalid chain witness: {0}")]
    InvalidChain(String),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// A prime together with an ordered list of ramification indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RamProfile {
    p: u64,
    indices: Vec<u64>,
}

impl RamProfile {
    pub fn new(p: u64, indices: Vec<u64>) -> Result<Self, AdmissibilityError> {
        if !is_prime(p) {
            return Err(AdmissibilityError::NotPrime(p));
        }
        if indices.len() < 3 {
            return Err(AdmissibilityError::TooFewPoints(indices.len()));
        }
        if let Some(pos) = indices.iter().position(|&e| e == 0) {
            return Err(AdmissibilityError::ZeroIndex(pos));
        }
        Ok(RamProfile { p, indices })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn r(&self) -> usize {
        self.indices.len()
    }

    /// `Σ (e_i - 1)`.
    pub fn ramification_sum(&self) -> u64 {
        self.indices.iter().map(|e| e - 1).sum()
    }

    /// The degree `d` with `2d - 2 = Σ (e_i - 1)`, if that sum is even.
    pub fn degree(&self) -> Option<u64> {
        let s = self.ramification_sum();
        s.is_multiple_of(2).then_some(s / 2 + 1)
    }

    /// First position whose index is divisible by `p`.
    pub fn wild_position(&self) -> Option<usize> {
        self.indices.iter().position(|e| e % self.p == 0)
    }

    fn genus_zero_degree(&self) -> Result<u64, AdmissibilityError> {
        self.degree().ok_or(AdmissibilityError::Parity)
    }
}

impl fmt::Display for RamProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} (", self.p)?;
        for (i, e) in self.indices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// Rounding of `e` to multiples of `p^m`, up and down, with the deficits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloorCeilData {
    pub m: u32,
    pub ebar_up: u64,
    pub ebar_dn: u64,
    pub edef_up: u64,
    pub edef_dn: u64,
}

pub fn floor_ceil(e: u64, p: u64, m: u32) -> Result<FloorCeilData, AdmissibilityError> {
    if e.is_multiple_of(p) {
        return Err(AdmissibilityError::WildIndex { position: 0, index: e });
    }
    let pm = p.pow(m);
    let ebar_dn = e / pm;
    let ebar_up = ebar_dn + 1;
    Ok(FloorCeilData { m, ebar_up, ebar_dn, edef_up: pm * ebar_up - e, edef_dn: e - pm * ebar_dn })
}

/// Data of an inseparable linear series with at least the requested
/// ramification: a separable map of degree `quotient_degree` with indices
/// `quotient_indices`, composed with the `m`-th Frobenius power, plus
/// `base_points[j]` base points at position `subset[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InseparableWitness {
    pub m: u32,
    /// Positions (0-indexed) rounded down.
    pub subset: Vec<usize>,
    pub quotient_indices: Vec<u64>,
    pub quotient_degree: u64,
    pub base_points: Vec<u64>,
}

impl InseparableWitness {
    /// Checks parity, the quotient Riemann-Hurwitz count, and that the
    /// Frobenius twist with base points fits in degree `d`.
    pub fn holds_for(&self, profile: &RamProfile) -> bool {
        let Some(d) = profile.degree() else { return false };
        let pm = profile.p.pow(self.m);
        let q = &self.quotient_indices;
        let odd = q.iter().sum::<u64>() % 2 == 1;
        let rh = 2 * self.quotient_degree == q.iter().map(|e| e - 1).sum::<u64>() + 2;
        let fits = d >= pm * self.quotient_degree + self.base_points.iter().sum::<u64>();
        let rounding = profile.indices.iter().enumerate().all(|(i, &e)| {
            if self.subset.contains(&i) {
                q[i] * pm <= e
            } else {
                q[i] * pm >= e
            }
        });
        odd && rh && fits && rounding && self.subset.len() == self.base_points.len()
    }
}

impl fmt::Display for InseparableWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.subset.iter().map(|i| (i + 1).to_string()).collect();
        let q: Vec<String> = self.quotient_indices.iter().map(u64::to_string).collect();
        let b: Vec<String> = self.base_points.iter().map(u64::to_string).collect();
        write!(
            f,
            "m={} S={{{}}} quotient indices ({}) quotient degree {} base points ({})",
            self.m,
            s.join(","),
            q.join(","),
            self.quotient_degree,
            b.join(",")
        )
    }
}

/// Intermediate indices `e'_1, .., e'_{r-1}` with `e'_1 = e_1` and
/// `e'_{r-1} = e_r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainWitness {
    pub primed: Vec<u64>,
}

fn triple_ok(a: u64, b: u64, c: u64, p: u64) -> bool {
    let s = a + b + c;
    a <= b + c && b <= a + c && c <= a + b && s % 2 == 1 && s < 2 * p
}

impl ChainWitness {
    pub fn verify(&self, p: u64, indices: &[u64]) -> Result<(), AdmissibilityError> {
        let r = indices.len();
        let bad = |msg: String| Err(AdmissibilityError::InvalidChain(msg));
        if r < 3 || self.primed.len() != r - 1 {
            return bad(format!("expected {} entries, got {}", r.saturating_sub(1), self.primed.len()));
        }
        if self.primed[0] != indices[0] || self.primed[r - 2] != indices[r - 1] {
            return bad("end points must equal e_1 and e_r".into());
        }
        if let Some(e) = self.primed.iter().find(|&&e| e == 0 || e % p == 0) {
            return bad(format!("entry {e} is not a positive integer prime to p"));
        }
        for m in 1..r - 1 {
            let (a, b, c) = (self.primed[m - 1], indices[m], self.primed[m]);
            if !triple_ok(a, b, c, p) {
                return bad(format!("triple ({a},{b},{c}) fails at step {m}"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for ChainWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.primed.iter().map(u64::to_string).collect();
        write!(f, "e'=({})", v.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThreePointVerdict {
    Admissible,
    Inadmissible(InseparableWitness),
}

impl ThreePointVerdict {
    pub fn is_admissible(&self) -> bool {
        matches!(self, ThreePointVerdict::Admissible)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainVerdict {
    Admissible(ChainWitness),
    Inadmissible,
}

impl ChainVerdict {
    pub fn is_admissible(&self) -> bool {
        matches!(self, ChainVerdict::Admissible(_))
    }
}

/// Checks the hypotheses shared by both three-point routes; returns `d`.
fn three_point_degree(profile: &RamProfile) -> Result<u64, AdmissibilityError> {
    if profile.r() != 3 {
        return Err(AdmissibilityError::NotThreePoints(profile.r()));
    }
    if let Some(position) = profile.wild_position() {
        return Err(AdmissibilityError::WildIndex { position, index: profile.indices[position] });
    }
    let d = profile.genus_zero_degree()?;
    if let Some(position) = profile.indices.iter().position(|&e| e > d) {
        return Err(AdmissibilityError::Triangle { position, index: profile.indices[position], degree: d });
    }
    Ok(d)
}

/// Powers `(m, p^m)` with `p^m ≤ d`.
fn powers_up_to(p: u64, d: u64) -> impl Iterator<Item = (u32, u64)> {
    std::iter::successors(Some((1u32, p)), move |&(m, pm)| pm.checked_mul(p).map(|n| (m + 1, n)))
        .take_while(move |&(_, pm)| pm <= d)
}

/// Three-point criterion: scans `m` ascending and `S` in binary order
/// (bit `i` selects position `i`), returning the first violation.
pub fn admissible_3pt(profile: &RamProfile) -> Result<ThreePointVerdict, AdmissibilityError> {
    let d = three_point_degree(profile)?;
    let p = profile.p;
    let e = &profile.indices;
    for (m, pm) in powers_up_to(p, d) {
        let fc: Vec<FloorCeilData> = e.iter().map(|&x| floor_ceil(x, p, m)).collect::<Result<_, _>>()?;
        for mask in 0u8..8 {
            let in_s = |i: usize| mask & (1 << i) != 0;
            if (0..3).any(|i| in_s(i) && e[i] <= pm) {
                continue;
            }
            let rounded: Vec<u64> = (0..3).map(|i| if in_s(i) { fc[i].ebar_dn } else { fc[i].ebar_up }).collect();
            if rounded.iter().sum::<u64>() % 2 == 0 {
                continue;
            }
            let deficit: u64 = (0..3).map(|i| if in_s(i) { fc[i].edef_dn } else { fc[i].edef_up }).sum();
            if deficit < pm {
                let subset: Vec<usize> = (0..3).filter(|&i| in_s(i)).collect();
                let base_points = subset.iter().map(|&i| fc[i].edef_dn).collect();
                let quotient_degree = (rounded.iter().sum::<u64>() - 1) / 2;
                return Ok(ThreePointVerdict::Inadmissible(InseparableWitness {
                    m,
                    subset,
                    quotient_indices: rounded,
                    quotient_degree,
                    base_points,
                }));
            }
        }
    }
    Ok(ThreePointVerdict::Admissible)
}

/// The same verdict through the degree-comparison form
/// `d < p^m · d[m,S] + Σ_{i∈S} (e_i mod p^m)`.
///
/// Kept as an independent cross-check of [`admissible_3pt`].
pub fn admissible_3pt_reformulated(profile: &RamProfile) -> Result<bool, AdmissibilityError> {
    let d = three_point_degree(profile)?;
    let e = &profile.indices;
    for (_, pm) in powers_up_to(profile.p, d) {
        for mask in 0u8..8 {
            let chosen: Vec<bool> = (0..3).map(|i| mask >> i & 1 == 1).collect();
            if (0..3).any(|i| chosen[i] && e[i] <= pm) {
                continue;
            }
            let mut twisted_sum = 0; // Σ (e'_i - 1)
            let mut parity = 0;
            let mut base = 0;
            for i in 0..3 {
                let q = if chosen[i] { e[i] / pm } else { e[i].div_ceil(pm) };
                parity += q;
                twisted_sum += q - 1;
                if chosen[i] {
                    base += e[i] % pm;
                }
            }
            if parity % 2 == 0 {
                continue;
            }
            let quotient_degree = twisted_sum / 2 + 1;
            if d >= pm * quotient_degree + base {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Chain criterion for indices all below `p`. Depth-first over
/// `e'_2, .., e'_{r-2}` in ascending order, so the witness returned is
/// the lexicographically smallest one.
pub fn admissible_chain(profile: &RamProfile) -> Result<ChainVerdict, AdmissibilityError> {
    let p = profile.p;
    let e = &profile.indices;
    if let Some(position) = e.iter().position(|&x| x >= p) {
        return Err(AdmissibilityError::NotBelowP { position, index: e[position] });
    }
    profile.genus_zero_degree()?;
    let r = e.len();
    let last = r - 2;
    let mut primed = vec![0; r - 1];
    primed[0] = e[0];
    primed[last] = e[r - 1];

    struct Search<'a> {
        p: u64,
        e: &'a [u64],
        last: usize,
        primed: Vec<u64>,
        dead: HashSet<(usize, u64)>,
    }

    impl Search<'_> {
        // picks primed[m] given primed[m - 1]
        fn extend(&mut self, m: usize) -> bool {
            let prev = self.primed[m - 1];
            if m == self.last {
                return triple_ok(prev, self.e[m], self.primed[m], self.p);
            }
            let p = self.p;
            for c in (1..2 * p).filter(|c| c % p != 0) {
                if !triple_ok(prev, self.e[m], c, self.p) || self.dead.contains(&(m, c)) {
                    continue;
                }
                self.primed[m] = c;
                if self.extend(m + 1) {
                    return true;
                }
                self.dead.insert((m, c));
            }
            false
        }
    }

    let mut search = Search { p, e, last, primed, dead: HashSet::new() };
    Ok(if search.extend(1) {
        ChainVerdict::Admissible(ChainWitness { primed: search.primed })
    } else {
        ChainVerdict::Inadmissible
    })
}

/// Outcome of the numerical dispatch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Admissible; carries the chain witness in the chain regime.
    Admissible(Option<ChainWitness>),
    /// Not admissible; carries the inseparable witness for three points.
    Inadmissible(Option<InseparableWitness>),
    /// More than three points with some index at least `p`.
    OutOfScope,
    /// Some index is divisible by `p`.
    Wild { position: usize, index: u64 },
}

impl Verdict {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Verdict::Admissible(_))
    }

    pub fn is_inadmissible(&self) -> bool {
        matches!(self, Verdict::Inadmissible(_))
    }
}

/// Three points use the floor/ceiling criterion; more points with every
/// index below `p` use the chain criterion; anything else is out of scope.
pub fn admissible(profile: &RamProfile) -> Result<Verdict, AdmissibilityError> {
    if let Some(position) = profile.wild_position() {
        return Ok(Verdict::Wild { position, index: profile.indices[position] });
    }
    profile.genus_zero_degree()?;
    if profile.r() == 3 {
        return Ok(match admissible_3pt(profile)? {
            ThreePointVerdict::Admissible => Verdict::Admissible(None),
            ThreePointVerdict::Inadmissible(w) => Verdict::Inadmissible(Some(w)),
        });
    }
    if profile.indices.iter().any(|&e| e >= profile.p) {
        return Ok(Verdict::OutOfScope);
    }
    Ok(match admissible_chain(profile)? {
        ChainVerdict::Admissible(w) => Verdict::Admissible(Some(w)),
        ChainVerdict::Inadmissible => Verdict::Inadmissible(None),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prof(p: u64, e: &[u64]) -> RamProfile {
        RamProfile::new(p, e.to_vec()).unwrap()
    }

    #[test]
    fn floor_ceil_examples() {
        let f = floor_ceil(7, 5, 1).unwrap();
        assert_eq!((f.ebar_up, f.ebar_dn, f.edef_up, f.edef_dn), (2, 1, 3, 2));
        let f = floor_ceil(4, 3, 1).unwrap();
        assert_eq!((f.ebar_up, f.ebar_dn, f.edef_up, f.edef_dn), (2, 1, 2, 1));
        let f = floor_ceil(4, 5, 1).unwrap();
        assert_eq!((f.ebar_up, f.ebar_dn, f.edef_up, f.edef_dn), (1, 0, 1, 4));
        assert!(floor_ceil(10, 5, 1).is_err());
    }

    #[test]
    fn floor_ceil_identities() {
        for p in [2u64, 3, 5, 7] {
            for m in 1..=3 {
                let pm = p.pow(m);
                for e in (1..=200).filter(|e| e % p != 0) {
                    let f = floor_ceil(e, p, m).unwrap();
                    assert_eq!(f.edef_up + f.edef_dn, pm);
                    assert_eq!(f.ebar_up, f.ebar_dn + 1);
                    assert!(f.edef_up < pm && f.edef_dn < pm);
                }
            }
        }
    }

    #[test]
    fn profile_validation() {
        assert_eq!(RamProfile::new(4, vec![1, 2, 3]), Err(AdmissibilityError::NotPrime(4)));
        assert_eq!(RamProfile::new(5, vec![1, 2]), Err(AdmissibilityError::TooFewPoints(2)));
        assert_eq!(RamProfile::new(5, vec![1, 0, 2]), Err(AdmissibilityError::ZeroIndex(1)));
        assert_eq!(prof(5, &[3, 3, 3, 3]).degree(), Some(5));
        assert_eq!(prof(5, &[2, 2, 2]).degree(), None);
    }

    #[test]
    fn three_point_examples() {
        assert_eq!(admissible_3pt(&prof(3, &[1, 4, 4])).unwrap(), ThreePointVerdict::Admissible);
        let v = admissible_3pt(&prof(5, &[3, 4, 4])).unwrap();
        let ThreePointVerdict::Inadmissible(w) = v else { panic!("expected witness") };
        assert_eq!(w.m, 1);
        assert!(w.subset.is_empty());
        assert_eq!(w.quotient_indices, vec![1, 1, 1]);
        assert_eq!(w.quotient_degree, 1);
        assert!(w.holds_for(&prof(5, &[3, 4, 4])));
        assert_eq!(admissible_3pt(&prof(5, &[2, 3, 4])).unwrap(), ThreePointVerdict::Admissible);
    }

    #[test]
    fn three_point_reformulated_examples() {
        assert!(!admissible_3pt_reformulated(&prof(5, &[3, 4, 4])).unwrap());
        assert!(admissible_3pt_reformulated(&prof(3, &[1, 4, 4])).unwrap());
    }

    #[test]
    fn three_point_precondition_errors() {
        assert_eq!(
            admissible_3pt(&prof(5, &[5, 3, 3])),
            Err(AdmissibilityError::WildIndex { position: 0, index: 5 })
        );
        assert_eq!(admissible_3pt(&prof(7, &[2, 2, 2])), Err(AdmissibilityError::Parity));
        assert_eq!(
            admissible_3pt(&prof(7, &[1, 2, 4])),
            Err(AdmissibilityError::Triangle { position: 2, index: 4, degree: 3 })
        );
        assert_eq!(admissible_3pt(&prof(7, &[2, 2, 2, 2])), Err(AdmissibilityError::NotThreePoints(4)));
    }

    #[test]
    fn chain_examples() {
        let v = admissible_chain(&prof(5, &[4, 4, 4, 4])).unwrap();
        assert_eq!(v, ChainVerdict::Admissible(ChainWitness { primed: vec![4, 1, 4] }));
        assert_eq!(admissible_chain(&prof(5, &[4, 4, 4, 4, 3])).unwrap(), ChainVerdict::Inadmissible);
        let v = admissible_chain(&prof(7, &[5, 3, 3])).unwrap();
        assert_eq!(v, ChainVerdict::Admissible(ChainWitness { primed: vec![5, 3] }));
        assert_eq!(
            admissible_chain(&prof(5, &[7, 4, 4, 4])),
            Err(AdmissibilityError::NotBelowP { position: 0, index: 7 })
        );
        assert_eq!(admissible_chain(&prof(5, &[2, 2, 2, 3])), Err(AdmissibilityError::Parity));
    }

    #[test]
    fn chain_witness_is_smallest() {
        // p=7, (3,3,3,3): e'_2 must make (3,3,e') odd, < 14, triangle -> 1,3,5
        let v = admissible_chain(&prof(7, &[3, 3, 3, 3])).unwrap();
        assert_eq!(v, ChainVerdict::Admissible(ChainWitness { primed: vec![3, 1, 3] }));
        if let ChainVerdict::Admissible(w) = v {
            w.verify(7, &[3, 3, 3, 3]).unwrap();
        }
    }

    #[test]
    fn chain_witness_verification_rejects_bad_chains() {
        let w = ChainWitness { primed: vec![4, 3, 4] };
        assert!(w.verify(5, &[4, 4, 4, 4]).is_err());
        let w = ChainWitness { primed: vec![4, 1] };
        assert!(w.verify(5, &[4, 4, 4, 4]).is_err());
        let w = ChainWitness { primed: vec![4, 5, 4] };
        assert!(w.verify(5, &[4, 4, 4, 4]).is_err());
    }

    #[test]
    fn dispatch_examples() {
        assert_eq!(
            admissible(&prof(3, &[2, 2, 2, 2])).unwrap(),
            Verdict::Admissible(Some(ChainWitness { primed: vec![2, 1, 2] }))
        );
        assert_eq!(admissible(&prof(5, &[4, 4, 4, 4, 4, 2])).unwrap(), Verdict::Inadmissible(None));
        assert_eq!(admissible(&prof(5, &[7, 7, 7, 7])).unwrap(), Verdict::OutOfScope);
        assert_eq!(admissible(&prof(5, &[5, 3, 3])).unwrap(), Verdict::Wild { position: 0, index: 5 });
        assert!(admissible(&prof(5, &[3, 7, 9])).unwrap().is_admissible());
    }
}
