//! Hurwitz factorizations: tuples of permutations with trivial product
//! generating a transitive group.
//!
//! Covers the braid action and pure-braid orbits, enumeration up to
//! simultaneous conjugation, the gluing construction of tuples whose
//! partial products are cycles of prescribed lengths, and the tuple-level
//! p-admissibility test.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::admissibility::{self, AdmissibilityError, ChainWitness, RamProfile};
use crate::permgroup::{self, PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HurwitzError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Admissibility(#[from] AdmissibilityError),
    #[error("tuple has no entries")]
    Empty,
    #[error("degree {degree} exceeds the bound {bound}")]
    DegreeBound { degree: usize, bound: usize },
    #[error("{points} points exceeds the bound {bound}")]
    PointsBound { points: usize, bound: usize },
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("sum of (e_i - 1) is {sum}, expected 2d - 2 = {expected}")]
    RiemannHurwitz { sum: usize, expected: usize },
    #[error("orbit search exceeded {0} states")]
    StateOverflow(usize),
    #[error("braid position {position} out of range for {points} points")]
    Position { position: usize, points: usize },
    #[error("entry {0} is not a single cycle")]
    NotSingleCycle(usize),
    #[error("entry {position} has length {length} divisible by p")]
    WildLength { position: usize, length: usize },
    #[error("tuple-level admissibility needs r = 3 or every length below p")]
    OutOfScope,
    #[error("tuple is not a valid Hurwitz factorization")]
    Invalid,
    #[error("tuple file: {0}")]
    File(String),
    #[error("three-point base case failed for ({0}, {1}, {2})")]
    BaseCase(usize, usize, usize),
}

/// Search limits. Defaults match the CLI defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_degree: usize,
    pub max_points: usize,
    pub max_states: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_degree: 6, max_points: 5, max_states: 1_000_000 }
    }
}

/// An ordered tuple of permutations of a common degree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HurwitzTuple {
    degree: usize,
    perms: Vec<Permutation>,
}

impl HurwitzTuple {
    pub fn new(perms: Vec<Permutation>) -> Result<Self, HurwitzError> {
        let degree = perms.first().ok_or(HurwitzError::Empty)?.degree();
        if let Some(bad) = perms.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch(degree, bad.degree()).into());
        }
        Ok(HurwitzTuple { degree, perms })
    }

    /// Parses one cycle-notation string per entry.
    pub fn parse(degree: usize, entries: &[&str]) -> Result<Self, HurwitzError> {
        let perms = entries
            .iter()
            .map(|s| permgroup::parse_cycles(s, degree))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(perms)
    }

    /// Reads the tuple file format: a `d=<int>` line, then one permutation
    /// per line. Blank lines and lines starting with `#` are skipped.
    pub fn from_file_str(text: &str) -> Result<Self, HurwitzError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| HurwitzError::File("missing d=<int> header".into()))?;
        let degree: usize = header
            .strip_prefix("d=")
            .and_then(|v| v.trim().parse().ok())
            .filter(|&d| d > 0)
            .ok_or_else(|| HurwitzError::File(format!("bad header {header:?}")))?;
        let perms = lines.map(|l| permgroup::parse_cycles(l, degree)).collect::<Result<Vec<_>, _>>()?;
        Self::new(perms)
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!("d={}\n", self.degree);
        for g in &self.perms {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn r(&self) -> usize {
        self.perms.len()
    }

    /// `σ_1 ∘ … ∘ σ_r`.
    pub fn product(&self) -> Permutation {
        self.perms.iter().fold(Permutation::identity(self.degree), |acc, g| acc.mul(g))
    }

    /// `σ_1 ∘ … ∘ σ_m` for `m = 1..=r`.
    pub fn partial_products(&self) -> Vec<Permutation> {
        let mut acc = Permutation::identity(self.degree);
        self.perms
            .iter()
            .map(|g| {
                acc = acc.mul(g);
                acc.clone()
            })
            .collect()
    }

    /// Lengths of the partial products `σ_1⋯σ_m`, `m = 1..r-1`, when all
    /// of them are single cycles.
    pub fn partial_cycle_lengths(&self) -> Option<Vec<usize>> {
        let partials = self.partial_products();
        partials[..self.r() - 1].iter().map(Permutation::single_cycle_length).collect()
    }

    /// Single-cycle lengths of the entries, when every entry is a cycle.
    pub fn cycle_lengths(&self) -> Option<Vec<usize>> {
        self.perms.iter().map(Permutation::single_cycle_length).collect()
    }

    pub fn is_transitive(&self) -> bool {
        permgroup::orbit(&self.perms, 0).len() == self.degree
    }

    pub fn validate(&self, expected_lengths: Option<&[usize]>) -> Validation {
        let mut diagnostics = Vec::new();
        let product_trivial = self.product().is_identity();
        if !product_trivial {
            diagnostics.push(format!("product is {}, not the identity", self.product()));
        }
        let transitive = self.is_transitive();
        if !transitive {
            diagnostics.push("generated group is not transitive".into());
        }
        let lengths_match = expected_lengths.map(|expected| {
            if expected.len() != self.r() {
                diagnostics.push(format!("expected {} entries, got {}", expected.len(), self.r()));
                return false;
            }
            let mut ok = true;
            for (i, (g, &e)) in self.perms.iter().zip(expected).enumerate() {
                if g.single_cycle_length() != Some(e) {
                    diagnostics.push(format!("entry {} is {}, not a {}-cycle", i + 1, g, e));
                    ok = false;
                }
            }
            ok
        });
        Validation { product_trivial, transitive, lengths_match, diagnostics }
    }

    /// Simultaneous relabelling: point `x` becomes `relabel(x)`.
    pub fn relabel(&self, relabel: &Permutation) -> HurwitzTuple {
        HurwitzTuple { degree: self.degree, perms: self.perms.iter().map(|g| g.relabel(relabel)).collect() }
    }

    pub fn braid_apply(&self, mv: BraidMove) -> Result<HurwitzTuple, HurwitzError> {
        if mv.position + 1 >= self.r() {
            return Err(HurwitzError::Position { position: mv.position + 1, points: self.r() });
        }
        let mut out = self.clone();
        braid_in_place(&mut out.perms, mv);
        Ok(out)
    }

    fn encode(&self) -> Vec<u8> {
        self.perms.iter().flat_map(|g| g.images().iter().map(|&x| x as u8)).collect()
    }
}

impl fmt::Display for HurwitzTuple {
    /// Entries concatenated in cycle notation, e.g. `(1 2)(1 2)(2 3)(2 3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.perms {
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for HurwitzTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.perms.iter().map(|g| g.to_string()).collect();
        write!(f, "HurwitzTuple[d={}]({})", self.degree, parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub product_trivial: bool,
    pub transitive: bool,
    pub lengths_match: Option<bool>,
    pub diagnostics: Vec<String>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.product_trivial && self.transitive && self.lengths_match != Some(false)
    }
}

/// Elementary braid at positions `position, position + 1` (0-indexed).
///
/// Forward: `(a, b) ↦ (b, b⁻¹ a b)`. Inverse: `(a, b) ↦ (a b a⁻¹, a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidMove {
    pub position: usize,
    pub inverse: bool,
}

impl BraidMove {
    pub fn forward(position: usize) -> Self {
        BraidMove { position, inverse: false }
    }

    pub fn backward(position: usize) -> Self {
        BraidMove { position, inverse: true }
    }
}

fn braid_in_place(perms: &mut [Permutation], mv: BraidMove) {
    let i = mv.position;
    let (a, b) = (perms[i].clone(), perms[i + 1].clone());
    if mv.inverse {
        perms[i] = a.mul(&b).mul(&a.inverse());
        perms[i + 1] = a;
    } else {
        perms[i + 1] = a.conjugate_by(&b);
        perms[i] = b;
    }
}

fn all_moves(r: usize) -> impl Iterator<Item = BraidMove> {
    (0..r.saturating_sub(1)).flat_map(|i| [BraidMove::forward(i), BraidMove::backward(i)])
}

/// A tuple up to simultaneous conjugation, held as its canonical
/// representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TupleClass(HurwitzTuple);

impl TupleClass {
    /// Canonical representative of a transitive tuple: the smallest image
    /// table among the `d` relabellings that number points in
    /// breadth-first order from each starting point. Conjugate tuples give
    /// the same candidate set, so the minimum is a class invariant.
    pub fn of(t: &HurwitzTuple) -> Result<TupleClass, HurwitzError> {
        if !t.is_transitive() {
            return Err(PermError::NotTransitive.into());
        }
        Ok(TupleClass(canonical_unchecked(t)))
    }

    pub fn representative(&self) -> &HurwitzTuple {
        &self.0
    }

    pub fn into_representative(self) -> HurwitzTuple {
        self.0
    }
}

fn canonical_unchecked(t: &HurwitzTuple) -> HurwitzTuple {
    let d = t.degree;
    let mut best: Option<HurwitzTuple> = None;
    let mut label = vec![usize::MAX; d];
    for start in 0..d {
        label.fill(usize::MAX);
        label[start] = 0;
        let mut next = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for g in &t.perms {
                let y = g.apply(x);
                if label[y] == usize::MAX {
                    label[y] = next;
                    next += 1;
                    queue.push_back(y);
                }
            }
        }
        let relabel = Permutation::from_images(label.clone()).expect("transitive labelling");
        let candidate = t.relabel(&relabel);
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
    }
    best.expect("degree is positive")
}

/// BFS over `(tuple, position permutation)` under elementary braids.
/// `visit` sees every reached tuple whose position permutation is the
/// identity, in BFS order; returning `true` stops the search.
fn pure_braid_bfs<F>(start: HurwitzTuple, canonical: bool, max_states: usize, mut visit: F) -> Result<(), HurwitzError>
where
    F: FnMut(&HurwitzTuple) -> bool,
{
    let r = start.r();
    let start = if canonical { canonical_unchecked(&start) } else { start };
    let key = |t: &HurwitzTuple, pos: &[u8]| {
        let mut k = t.encode();
        k.extend_from_slice(pos);
        k
    };
    let identity: Vec<u8> = (0..r as u8).collect();
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    seen.insert(key(&start, &identity));
    let mut queue = VecDeque::from([(start, identity.clone())]);
    while let Some((t, pos)) = queue.pop_front() {
        if pos == identity && visit(&t) {
            return Ok(());
        }
        for mv in all_moves(r) {
            let mut perms = t.perms.clone();
            braid_in_place(&mut perms, mv);
            let mut next = HurwitzTuple { degree: t.degree, perms };
            if canonical {
                next = canonical_unchecked(&next);
            }
            let mut npos = pos.clone();
            npos.swap(mv.position, mv.position + 1);
            if seen.insert(key(&next, &npos)) {
                if seen.len() > max_states {
                    return Err(HurwitzError::StateOverflow(max_states));
                }
                queue.push_back((next, npos));
            }
        }
    }
    Ok(())
}

/// All tuples reachable from `t` by pure braids, sorted.
pub fn pure_braid_orbit(t: &HurwitzTuple, max_states: usize) -> Result<Vec<HurwitzTuple>, HurwitzError> {
    let mut out = BTreeSet::new();
    pure_braid_bfs(t.clone(), false, max_states, |u| {
        out.insert(u.clone());
        false
    })?;
    Ok(out.into_iter().collect())
}

/// Pure-braid orbit of a transitive tuple, up to simultaneous conjugation.
pub fn pure_braid_orbit_classes(t: &HurwitzTuple, max_states: usize) -> Result<Vec<TupleClass>, HurwitzError> {
    if !t.is_transitive() {
        return Err(PermError::NotTransitive.into());
    }
    let mut out = BTreeSet::new();
    pure_braid_bfs(t.clone(), true, max_states, |u| {
        out.insert(TupleClass(u.clone()));
        false
    })?;
    Ok(out.into_iter().collect())
}

/// All cycles of length `e` in `S_d` (the identity for `e = 1`).
pub fn cycles_of_length(d: usize, e: usize) -> Vec<Permutation> {
    if e == 1 {
        return vec![Permutation::identity(d)];
    }
    if e == 0 || e > d {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut subset = Vec::with_capacity(e);
    fn subsets(d: usize, e: usize, from: usize, subset: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if subset.len() == e {
            out.push(subset.clone());
            return;
        }
        for x in from..d {
            subset.push(x);
            subsets(d, e, x + 1, subset, out);
            subset.pop();
        }
    }
    let mut all = Vec::new();
    subsets(d, e, 0, &mut subset, &mut all);
    for s in all {
        // smallest point first, the rest in every order
        let mut rest = s[1..].to_vec();
        permutations(&mut rest, 0, &mut |arr| {
            let mut cyc = vec![s[0]];
            cyc.extend_from_slice(arr);
            out.push(Permutation::cycle(d, &cyc).expect("distinct points"));
        });
    }
    out
}

fn permutations(arr: &mut [usize], k: usize, f: &mut impl FnMut(&[usize])) {
    if k == arr.len() {
        f(arr);
        return;
    }
    for i in k..arr.len() {
        arr.swap(k, i);
        permutations(arr, k + 1, f);
        arr.swap(k, i);
    }
}

fn check_genus_zero(d: usize, lengths: &[usize]) -> Result<(), HurwitzError> {
    if lengths.len() < 3 {
        return Err(HurwitzError::TooFewPoints(lengths.len()));
    }
    if lengths.contains(&0) {
        return Err(AdmissibilityError::ZeroIndex(lengths.iter().position(|&e| e == 0).unwrap()).into());
    }
    let sum: usize = lengths.iter().map(|e| e - 1).sum();
    if d == 0 || sum != 2 * d - 2 {
        return Err(HurwitzError::RiemannHurwitz { sum, expected: (2 * d).saturating_sub(2) });
    }
    Ok(())
}

/// Every Hurwitz factorization for `(d, r, lengths)` up to simultaneous
/// conjugation, sorted by canonical representative.
pub fn enumerate(d: usize, lengths: &[usize], bounds: &Bounds) -> Result<Vec<TupleClass>, HurwitzError> {
    if d > bounds.max_degree {
        return Err(HurwitzError::DegreeBound { degree: d, bound: bounds.max_degree });
    }
    if lengths.len() > bounds.max_points {
        return Err(HurwitzError::PointsBound { points: lengths.len(), bound: bounds.max_points });
    }
    check_genus_zero(d, lengths)?;
    if lengths.iter().any(|&e| e > d) {
        return Ok(Vec::new());
    }
    let r = lengths.len();
    // every class has a member whose first entry is (0 1 .. e_1-1)
    let first = Permutation::cycle(d, &(0..lengths[0]).collect::<Vec<_>>())?;
    let choices: Vec<Vec<Permutation>> = lengths[1..r - 1].iter().map(|&e| cycles_of_length(d, e)).collect();
    let mut found = BTreeSet::new();
    let mut stack = vec![first.clone()];
    let mut prefix = vec![first];
    fn walk(
        depth: usize,
        choices: &[Vec<Permutation>],
        stack: &mut Vec<Permutation>,
        prefix: &mut Vec<Permutation>,
        last_len: usize,
        found: &mut BTreeSet<TupleClass>,
    ) {
        if depth == choices.len() {
            let last = prefix.last().expect("nonempty").inverse();
            if last.single_cycle_length() != Some(last_len) {
                return;
            }
            let mut perms = stack.clone();
            perms.push(last);
            let t = HurwitzTuple { degree: perms[0].degree(), perms };
            if t.is_transitive() {
                found.insert(TupleClass(canonical_unchecked(&t)));
            }
            return;
        }
        for g in &choices[depth] {
            let partial = prefix.last().expect("nonempty").mul(g);
            stack.push(g.clone());
            prefix.push(partial);
            walk(depth + 1, choices, stack, prefix, last_len, found);
            stack.pop();
            prefix.pop();
        }
    }
    walk(0, &choices, &mut stack, &mut prefix, lengths[r - 1], &mut found);
    Ok(found.into_iter().collect())
}

/// A Hurwitz factorization for three single cycles of lengths
/// `(e1, e2, e3)` with `e1 + e2 + e3 = 2d + 1` and each `e_i ≤ d`:
/// `σ1 = (0 1 .. e1-1)`, `σ2 = (k-1 .. 1 0 e1 e1+1 .. d-1)` with
/// `k = e1 + e2 - d`, and `σ3 = (σ1 σ2)⁻¹`.
pub fn three_point_factorization(e1: usize, e2: usize, e3: usize) -> Result<HurwitzTuple, HurwitzError> {
    let total = e1 + e2 + e3;
    if total.is_multiple_of(2) || e1 == 0 || e2 == 0 || e3 == 0 {
        return Err(HurwitzError::BaseCase(e1, e2, e3));
    }
    let d = (total - 1) / 2;
    if e1 > d || e2 > d || e3 > d {
        return Err(HurwitzError::BaseCase(e1, e2, e3));
    }
    let k = e1 + e2 - d;
    let s1 = Permutation::cycle(d, &(0..e1).collect::<Vec<_>>())?;
    let pts: Vec<usize> = (0..k).rev().chain(e1..d).collect();
    let s2 = Permutation::cycle(d, &pts)?;
    let s3 = s1.mul(&s2).inverse();
    let t = HurwitzTuple::new(vec![s1, s2, s3])?;
    if !t.validate(Some(&[e1, e2, e3])).is_valid() {
        return Err(HurwitzError::BaseCase(e1, e2, e3));
    }
    Ok(t)
}

/// Relabels so that the listed points become `targets` in order and the
/// remaining points fill the remaining labels in increasing order.
fn relabel_placing(t: &HurwitzTuple, points: &[usize], targets: &[usize]) -> HurwitzTuple {
    let d = t.degree;
    let mut images = vec![usize::MAX; d];
    let mut taken = vec![false; d];
    for (&x, &y) in points.iter().zip(targets) {
        images[x] = y;
        taken[y] = true;
    }
    let mut free = (0..d).filter(|&y| !taken[y]);
    for img in images.iter_mut() {
        if *img == usize::MAX {
            *img = free.next().expect("counts match");
        }
    }
    t.relabel(&Permutation::from_images(images).expect("bijection"))
}

/// Points of a single cycle in cycle order; a fixed point for the identity.
fn cycle_points(g: &Permutation) -> Vec<usize> {
    g.cycles().into_iter().next().unwrap_or_else(|| vec![0])
}

fn shift(g: &Permutation, offset: usize, degree: usize) -> Permutation {
    let mut images: Vec<usize> = (0..degree).collect();
    for (x, &y) in g.images().iter().enumerate() {
        images[x + offset] = y + offset;
    }
    Permutation::from_images(images).expect("shifted bijection")
}

/// Builds a Hurwitz factorization whose partial products `σ_1⋯σ_m` are
/// cycles of length `chain.primed[m-1]`, by gluing a tuple for
/// `(e_1, .., e_{r-2}, e'_{r-2})` to the three-point tuple for
/// `(e'_{r-2}, e_{r-1}, e_r)` along the shared cycle.
pub fn construct(p: u64, lengths: &[usize], chain: &ChainWitness) -> Result<HurwitzTuple, HurwitzError> {
    let indices: Vec<u64> = lengths.iter().map(|&e| e as u64).collect();
    let profile = RamProfile::new(p, indices.clone())?;
    profile.degree().ok_or(AdmissibilityError::Parity)?;
    chain.verify(p, &indices)?;
    let primed: Vec<usize> = chain.primed.iter().map(|&e| e as usize).collect();
    glue(lengths, &primed)
}

fn glue(lengths: &[usize], primed: &[usize]) -> Result<HurwitzTuple, HurwitzError> {
    let r = lengths.len();
    if r == 3 {
        return three_point_factorization(lengths[0], lengths[1], lengths[2]);
    }
    let shared = primed[r - 3];
    let mut head_lengths = lengths[..r - 2].to_vec();
    head_lengths.push(shared);
    let head = glue(&head_lengths, &primed[..r - 2])?;
    let tail = three_point_factorization(shared, lengths[r - 2], lengths[r - 1])?;
    let (d1, d2) = (head.degree, tail.degree);
    let d = d1 + d2 - shared;

    // head's last entry becomes (d1-e'+1 .. d1), 1-indexed
    let head_targets: Vec<usize> = (d1 - shared..d1).collect();
    let head = relabel_placing(&head, &cycle_points(&head.perms[r - 2]), &head_targets);
    // tail's first entry becomes the inverse of that cycle, shifted down by d1-e'
    let tail_targets: Vec<usize> = (0..shared).rev().collect();
    let tail = relabel_placing(&tail, &cycle_points(&tail.perms[0]), &tail_targets);

    let mut perms: Vec<Permutation> = head.perms[..r - 2].iter().map(|g| shift(g, 0, d)).collect();
    perms.extend(tail.perms[1..].iter().map(|g| shift(g, d1 - shared, d)));
    HurwitzTuple::new(perms)
}

/// How [`is_p_admissible_tuple`] decides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdmissibilityMode {
    /// Numerical criterion on the cycle lengths.
    NumericalFastpath,
    /// Search the pure-braid orbit for a tuple with cycle partial products
    /// of small total length.
    OrbitSearch,
}

fn partial_products_admissible(t: &HurwitzTuple, p: usize) -> bool {
    let Some(partial) = t.partial_cycle_lengths() else { return false };
    let lengths = t.cycle_lengths().expect("single cycles checked");
    (0..t.r() - 2).all(|m| partial[m] + lengths[m + 1] + partial[m + 1] < 2 * p)
}

/// Tuple-level p-admissibility for single-cycle entries of lengths prime
/// to `p`, when `r = 3` or every length is below `p`.
///
/// In orbit-search mode with `r = 3` and some length at least `p`, the
/// numerical three-point criterion is the definition and is used directly.
pub fn is_p_admissible_tuple(
    t: &HurwitzTuple,
    p: u64,
    mode: AdmissibilityMode,
    bounds: &Bounds,
) -> Result<bool, HurwitzError> {
    let lengths = t.cycle_lengths().ok_or_else(|| {
        HurwitzError::NotSingleCycle(t.perms.iter().position(|g| g.single_cycle_length().is_none()).unwrap() + 1)
    })?;
    if let Some(position) = lengths.iter().position(|&e| (e as u64).is_multiple_of(p)) {
        return Err(HurwitzError::WildLength { position: position + 1, length: lengths[position] });
    }
    check_genus_zero(t.degree, &lengths)?;
    if !t.validate(None).is_valid() {
        return Err(HurwitzError::Invalid);
    }
    let below_p = lengths.iter().all(|&e| (e as u64) < p);
    if t.r() != 3 && !below_p {
        return Err(HurwitzError::OutOfScope);
    }
    let numerical = || -> Result<bool, HurwitzError> {
        let profile = RamProfile::new(p, lengths.iter().map(|&e| e as u64).collect())?;
        Ok(admissibility::admissible(&profile)?.is_admissible())
    };
    match mode {
        AdmissibilityMode::NumericalFastpath => numerical(),
        AdmissibilityMode::OrbitSearch if !below_p => numerical(),
        AdmissibilityMode::OrbitSearch => {
            if t.degree > bounds.max_degree {
                return Err(HurwitzError::DegreeBound { degree: t.degree, bound: bounds.max_degree });
            }
            let mut found = false;
            pure_braid_bfs(t.clone(), true, bounds.max_states, |u| {
                found = partial_products_admissible(u, p as usize);
                found
            })?;
            Ok(found)
        }
    }
}

/// Outcome of [`single_orbit_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCheck {
    /// Number of conjugacy classes of factorizations.
    pub classes: usize,
    /// How many of those the pure-braid orbit of the first class reaches.
    pub classes_in_orbit: usize,
    /// Size of the raw (unconjugated) pure-braid orbit of the first class.
    pub raw_orbit_size: usize,
    pub single_orbit: bool,
}

/// Whether all factorizations for `(d, r, lengths)` form a single
/// pure-braid orbit up to simultaneous conjugation.
pub fn single_orbit_check(d: usize, lengths: &[usize], bounds: &Bounds) -> Result<OrbitCheck, HurwitzError> {
    let classes = enumerate(d, lengths, bounds)?;
    let Some(first) = classes.first() else {
        return Ok(OrbitCheck { classes: 0, classes_in_orbit: 0, raw_orbit_size: 0, single_orbit: true });
    };
    let reached: HashSet<TupleClass> =
        pure_braid_orbit_classes(first.representative(), bounds.max_states)?.into_iter().collect();
    let classes_in_orbit = classes.iter().filter(|c| reached.contains(c)).count();
    let raw_orbit_size = pure_braid_orbit(first.representative(), bounds.max_states)?.len();
    Ok(OrbitCheck {
        classes: classes.len(),
        classes_in_orbit,
        raw_orbit_size,
        single_orbit: classes_in_orbit == classes.len(),
    })
}

/// A pure-braid transform of `t` (not merely a conjugate) all of whose
/// partial products are single cycles, the first found in BFS order.
pub fn cycle_partial_normalform(t: &HurwitzTuple, max_states: usize) -> Result<Option<HurwitzTuple>, HurwitzError> {
    let mut found = None;
    pure_braid_bfs(t.clone(), false, max_states, |u| {
        if u.partial_products().iter().all(|g| g.single_cycle_length().is_some()) {
            found = Some(u.clone());
            true
        } else {
            false
        }
    })?;
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(d: usize, entries: &[&str]) -> HurwitzTuple {
        HurwitzTuple::parse(d, entries).unwrap()
    }

    fn class(d: usize, entries: &[&str]) -> TupleClass {
        TupleClass::of(&tuple(d, entries)).unwrap()
    }

    #[test]
    fn validate_examples() {
        let t = tuple(3, &["(1 2)", "(1 2)", "(2 3)", "(2 3)"]);
        assert!(t.validate(Some(&[2, 2, 2, 2])).is_valid());
        let t = tuple(4, &["(1 2 3 4)", "(1 3)", "(1 4)", "(2 3)"]);
        assert!(t.validate(Some(&[4, 2, 2, 2])).is_valid());
        let v = tuple(3, &["(1 2)", "(1 2)"]).validate(None);
        assert!(v.product_trivial && !v.transitive && !v.is_valid());
        let v = tuple(3, &["(1 2)", "(2 3)"]).validate(Some(&[2, 2]));
        assert!(!v.product_trivial);
        let v = tuple(3, &["(1 2)", "(1 2)", "(2 3)", "(2 3)"]).validate(Some(&[2, 2, 2, 3]));
        assert_eq!(v.lengths_match, Some(false));
    }

    #[test]
    fn braid_forward_example() {
        let t = tuple(3, &["(1 2)", "(1 2)", "(2 3)", "(2 3)"]);
        let u = t.braid_apply(BraidMove::forward(1)).unwrap();
        assert_eq!(u, tuple(3, &["(1 2)", "(2 3)", "(1 3)", "(2 3)"]));
        assert_eq!(u.braid_apply(BraidMove::backward(1)).unwrap(), t);
        assert!(matches!(t.braid_apply(BraidMove::forward(3)), Err(HurwitzError::Position { .. })));
    }

    #[test]
    fn braid_preserves_cycle_types() {
        let t = tuple(4, &["(1 2 3 4)", "(1 3)", "(1 4)", "(2 3)"]);
        for mv in all_moves(4) {
            let u = t.braid_apply(mv).unwrap();
            assert!(u.product().is_identity());
            let mut a: Vec<_> = t.perms().iter().map(Permutation::cycle_type).collect();
            let mut b: Vec<_> = u.perms().iter().map(Permutation::cycle_type).collect();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn canonical_form_is_conjugation_invariant() {
        let t = tuple(4, &["(1 2 3 4)", "(1 3)", "(1 4)", "(2 3)"]);
        let h = permgroup::parse_cycles("(1 3 2)", 4).unwrap();
        assert_eq!(TupleClass::of(&t).unwrap(), TupleClass::of(&t.relabel(&h)).unwrap());
    }

    #[test]
    fn enumerate_degree_three_simple_branching() {
        let classes = enumerate(3, &[2, 2, 2, 2], &Bounds::default()).unwrap();
        let expected: BTreeSet<TupleClass> = [
            ["(1 2)", "(1 2)", "(2 3)", "(2 3)"],
            ["(1 2)", "(2 3)", "(2 3)", "(1 2)"],
            ["(1 2)", "(2 3)", "(3 1)", "(2 3)"],
            ["(1 2)", "(2 3)", "(1 2)", "(3 1)"],
        ]
        .iter()
        .map(|e| class(3, e))
        .collect();
        assert_eq!(classes.into_iter().collect::<BTreeSet<_>>(), expected);
    }

    #[test]
    fn enumerate_three_point_unique() {
        let classes = enumerate(3, &[2, 2, 3], &Bounds::default()).unwrap();
        assert_eq!(classes, vec![class(3, &["(1 2)", "(2 3)", "(1 3 2)"])]);
    }

    #[test]
    fn enumerate_errors_and_bounds() {
        assert!(matches!(enumerate(3, &[2, 2, 2], &Bounds::default()), Err(HurwitzError::RiemannHurwitz { .. })));
        assert!(matches!(enumerate(7, &[7, 7, 1], &Bounds::default()), Err(HurwitzError::DegreeBound { .. })));
        assert!(matches!(enumerate(3, &[2, 3], &Bounds::default()), Err(HurwitzError::TooFewPoints(2))));
        assert!(enumerate(3, &[1, 1, 5], &Bounds::default()).unwrap().is_empty());
    }

    #[test]
    fn cycles_of_length_counts() {
        assert_eq!(cycles_of_length(5, 1).len(), 1);
        assert_eq!(cycles_of_length(5, 2).len(), 10);
        assert_eq!(cycles_of_length(5, 3).len(), 20);
        assert_eq!(cycles_of_length(5, 5).len(), 24);
        assert_eq!(cycles_of_length(3, 4).len(), 0);
    }

    #[test]
    fn construct_characteristic_three_example() {
        let chain = ChainWitness { primed: vec![2, 1, 2] };
        let t = construct(3, &[2, 2, 2, 2], &chain).unwrap();
        assert_eq!(t, tuple(3, &["(1 2)", "(1 2)", "(2 3)", "(2 3)"]));
        assert_eq!(t.partial_cycle_lengths(), Some(vec![2, 1, 2]));
    }

    #[test]
    fn construct_base_case_is_the_unique_class() {
        let chain = ChainWitness { primed: vec![5, 3] };
        let t = construct(7, &[5, 3, 3], &chain).unwrap();
        let classes = enumerate(5, &[5, 3, 3], &Bounds::default()).unwrap();
        assert_eq!(classes, vec![TupleClass::of(&t).unwrap()]);
    }

    #[test]
    fn construct_rejects_bad_chain() {
        let chain = ChainWitness { primed: vec![2, 2, 2] };
        assert!(matches!(construct(3, &[2, 2, 2, 2], &chain), Err(HurwitzError::Admissibility(_))));
    }

    #[test]
    fn three_point_factorization_matches_enumeration() {
        for d in 1..=7usize {
            for e1 in 1..=d {
                for e2 in 1..=d {
                    let Some(e3) = (2 * d + 1).checked_sub(e1 + e2) else { continue };
                    if e3 == 0 || e3 > d {
                        continue;
                    }
                    let t = three_point_factorization(e1, e2, e3).unwrap();
                    let bounds = Bounds { max_degree: 7, ..Bounds::default() };
                    let classes = enumerate(d, &[e1, e2, e3], &bounds).unwrap();
                    assert_eq!(classes, vec![TupleClass::of(&t).unwrap()], "({e1},{e2},{e3})");
                }
            }
        }
    }

    #[test]
    fn tuple_admissibility_modes() {
        let t = tuple(3, &["(1 2)", "(1 2)", "(2 3)", "(2 3)"]);
        let b = Bounds::default();
        assert!(is_p_admissible_tuple(&t, 3, AdmissibilityMode::OrbitSearch, &b).unwrap());
        assert!(is_p_admissible_tuple(&t, 3, AdmissibilityMode::NumericalFastpath, &b).unwrap());
        let t3 = tuple(3, &["(1 2)", "(2 3)", "(1 3 2)"]);
        assert!(is_p_admissible_tuple(&t3, 5, AdmissibilityMode::OrbitSearch, &b).unwrap());
        assert!(matches!(
            is_p_admissible_tuple(&t3, 3, AdmissibilityMode::OrbitSearch, &b),
            Err(HurwitzError::WildLength { position: 3, length: 3 })
        ));
    }

    #[test]
    fn single_orbit_examples() {
        let b = Bounds::default();
        let c = single_orbit_check(3, &[2, 2, 2, 2], &b).unwrap();
        assert_eq!((c.classes, c.classes_in_orbit, c.single_orbit), (4, 4, true));
        let c = single_orbit_check(4, &[4, 2, 2, 2], &b).unwrap();
        assert_eq!((c.classes, c.single_orbit), (4, true));
        let c = single_orbit_check(3, &[2, 2, 3], &b).unwrap();
        assert_eq!((c.classes, c.single_orbit), (1, true));
    }

    #[test]
    fn normal_form_examples() {
        let t = tuple(3, &["(1 2)", "(1 2)", "(2 3)", "(2 3)"]);
        assert_eq!(cycle_partial_normalform(&t, 1_000_000).unwrap(), Some(t.clone()));
        let t = tuple(3, &["(1 2)", "(2 3)", "(2 3)", "(1 2)"]);
        let n = cycle_partial_normalform(&t, 1_000_000).unwrap().expect("normal form exists");
        assert!(n.partial_products().iter().all(|g| g.single_cycle_length().is_some()));
        assert!(pure_braid_orbit(&t, 1_000_000).unwrap().contains(&n));
    }

    #[test]
    fn tuple_file_round_trip() {
        let t = tuple(10, &["(1,3,5,8,2,4,6,7)", "(10,8,6,4,9,7,5,3)", "(10,3,1,9,4,2)(7,8)"]);
        let text = t.to_file_string();
        assert_eq!(HurwitzTuple::from_file_str(&text).unwrap(), t);
        let with_comments = format!("# example\n\n{text}");
        assert_eq!(HurwitzTuple::from_file_str(&with_comments).unwrap(), t);
        assert!(HurwitzTuple::from_file_str("(1 2)\n").is_err());
        assert!(HurwitzTuple::from_file_str("d=0\n(1)\n").is_err());
        assert!(HurwitzTuple::from_file_str("d=3\n").is_err());
    }
}
