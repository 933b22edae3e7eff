//! Permutations of `{0, .., d-1}` and the small amount of permutation-group
//! machinery the cover deciders need.
//!
//! Points are 0-indexed in memory. All text (parsing and `Display`) is
//! 1-indexed cycle notation, e.g. `(1 2 3)(4 5)` or `(10,8,6,4)`.
//!
//! Products follow function composition: `a.compose(b)` applies `b` first.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default degree bound for [`classify_group`].
pub const DEFAULT_CLASSIFY_BOUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("malformed cycle notation at offset {offset}: {reason}")]
    Malformed { offset: usize, reason: &'static str },
    #[error("entry {entry} out of range 1..={degree}")]
    OutOfRange { entry: usize, degree: usize },
    #[error("repeated entry {0}")]
    RepeatedEntry(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("image table is not a bijection")]
    NotBijection,
    #[error("no generators supplied")]
    NoGenerators,
    #[error("generated group is not transitive")]
    NotTransitive,
    #[error("permutation does not preserve the block system")]
    BlocksNotPreserved,
    #[error("degree {degree} exceeds the configured bound {bound}")]
    DegreeTooLarge { degree: usize, bound: usize },
}

/// A bijection of `{0, .., d-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "PermRepr", try_from = "PermRepr")]
pub struct Permutation {
    images: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PermRepr {
    degree: usize,
    cycles: String,
}

impl From<Permutation> for PermRepr {
    fn from(p: Permutation) -> Self {
        PermRepr { degree: p.degree(), cycles: p.to_string() }
    }
}

impl TryFrom<PermRepr> for Permutation {
    type Error = PermError;
    fn try_from(r: PermRepr) -> Result<Self, PermError> {
        parse_cycles(&r.cycles, r.degree)
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree).collect() }
    }

    /// Builds a permutation from a 0-indexed image table.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        if images.is_empty() {
            return Err(PermError::ZeroDegree);
        }
        let mut hit = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || hit[x] {
                return Err(PermError::NotBijection);
            }
            hit[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from disjoint 0-indexed cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut seen = vec![false; degree];
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for &x in cycle {
                if x >= degree {
                    return Err(PermError::OutOfRange { entry: x + 1, degree });
                }
                if seen[x] {
                    return Err(PermError::RepeatedEntry(x + 1));
                }
                seen[x] = true;
            }
            for (i, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// The single cycle through `points` (0-indexed), in that order.
    pub fn cycle(degree: usize, points: &[usize]) -> Result<Self, PermError> {
        Self::from_cycles(degree, &[points.to_vec()])
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ rhs`: `rhs` is applied first.
    pub fn compose(&self, rhs: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != rhs.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), rhs.degree()));
        }
        Ok(self.mul(rhs))
    }

    pub(crate) fn mul(&self, rhs: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), rhs.degree());
        Permutation { images: rhs.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    /// `h⁻¹ ∘ self ∘ h`.
    pub fn conjugate_by(&self, h: &Permutation) -> Permutation {
        h.inverse().mul(&self.mul(h))
    }

    /// Relabels points by `relabel`: the result maps `relabel(x)` to `relabel(self(x))`.
    pub fn relabel(&self, relabel: &Permutation) -> Permutation {
        self.conjugate_by(&relabel.inverse())
    }

    /// Nontrivial cycles, each rotated to start at its smallest point,
    /// ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Lengths of all cycles, fixed points included, sorted descending.
    pub fn cycle_type(&self) -> CycleType {
        let mut seen = vec![false; self.degree()];
        let mut lengths = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        CycleType(lengths)
    }

    /// Length of `self` as a single cycle. The identity is the cycle of
    /// length 1; anything with two or more nontrivial cycles is `None`.
    pub fn single_cycle_length(&self) -> Option<usize> {
        let moved = self.images.iter().enumerate().filter(|(i, x)| i != *x).count();
        if moved == 0 {
            return Some(1);
        }
        let cycles = self.cycles();
        (cycles.len() == 1).then(|| cycles[0].len())
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    /// Order of the permutation as a group element.
    pub fn order(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycles().iter().fold(1u64, |acc, c| {
            let l = c.len() as u64;
            acc / gcd(acc, l) * l
        })
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, 1-indexed. The identity prints as `(1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("(1)");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[d={}]{}", self.degree(), self)
    }
}

/// Multiset of cycle lengths (fixed points included), sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleType(pub Vec<usize>);

impl CycleType {
    pub fn lengths(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Lengths with the 1s removed.
    pub fn nontrivial(&self) -> Vec<usize> {
        self.0.iter().copied().filter(|&l| l > 1).collect()
    }
}

/// Parses the groups of a cycle-notation string into 1-indexed entries.
///
/// Grammar: `tuple := group+`, `group := '(' int ((','|' ')+ int)* ')'`,
/// whitespace allowed between tokens.
fn parse_groups(text: &str) -> Result<Vec<Vec<usize>>, PermError> {
    let b = text.as_bytes();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < b.len() && b[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    let read_int = |i: &mut usize| -> Result<usize, PermError> {
        let start = *i;
        let mut v: usize = 0;
        while *i < b.len() && b[*i].is_ascii_digit() {
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add((b[*i] - b'0') as usize))
                .ok_or(PermError::Malformed { offset: start, reason: "integer overflow" })?;
            *i += 1;
        }
        if *i == start {
            return Err(PermError::Malformed { offset: start, reason: "expected integer" });
        }
        Ok(v)
    };

    let mut groups = Vec::new();
    skip_ws(&mut i);
    if i == b.len() {
        return Err(PermError::Malformed { offset: 0, reason: "empty input" });
    }
    while i < b.len() {
        if b[i] != b'(' {
            return Err(PermError::Malformed { offset: i, reason: "expected '('" });
        }
        i += 1;
        skip_ws(&mut i);
        let mut group = vec![read_int(&mut i)?];
        loop {
            let sep_start = i;
            let mut comma = false;
            while i < b.len() && (b[i] == b',' || b[i].is_ascii_whitespace()) {
                comma |= b[i] == b',';
                i += 1;
            }
            if i == b.len() {
                return Err(PermError::Malformed { offset: i, reason: "unterminated group" });
            }
            if b[i] == b')' {
                if comma {
                    return Err(PermError::Malformed { offset: i, reason: "trailing separator" });
                }
                i += 1;
                break;
            }
            if i == sep_start {
                return Err(PermError::Malformed { offset: i, reason: "expected separator" });
            }
            group.push(read_int(&mut i)?);
        }
        groups.push(group);
        skip_ws(&mut i);
    }
    Ok(groups)
}

/// Parses disjoint-cycle notation (1-indexed) into a permutation of the
/// given degree. Unlisted points are fixed.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation, PermError> {
    if degree == 0 {
        return Err(PermError::ZeroDegree);
    }
    let groups = parse_groups(text)?;
    let mut cycles = Vec::with_capacity(groups.len());
    for group in groups {
        let mut cycle = Vec::with_capacity(group.len());
        for entry in group {
            if entry == 0 || entry > degree {
                return Err(PermError::OutOfRange { entry, degree });
            }
            cycle.push(entry - 1);
        }
        cycles.push(cycle);
    }
    Permutation::from_cycles(degree, &cycles)
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Parses with degree equal to the largest entry mentioned.
    fn from_str(s: &str) -> Result<Self, PermError> {
        let degree = parse_groups(s)?.into_iter().flatten().max().unwrap_or(0);
        parse_cycles(s, degree.max(1))
    }
}

/// `a ∘ b`, `b` applied first.
pub fn compose(a: &Permutation, b: &Permutation) -> Result<Permutation, PermError> {
    a.compose(b)
}

/// Product `g_1 ∘ g_2 ∘ … ∘ g_n` (rightmost applied first).
pub fn product<'a, I>(degree: usize, perms: I) -> Result<Permutation, PermError>
where
    I: IntoIterator<Item = &'a Permutation>,
{
    let mut acc = Permutation::identity(degree);
    for p in perms {
        acc = acc.compose(p)?;
    }
    Ok(acc)
}

fn common_degree(gens: &[Permutation]) -> Result<usize, PermError> {
    let first = gens.first().ok_or(PermError::NoGenerators)?;
    let d = first.degree();
    if let Some(bad) = gens.iter().find(|g| g.degree() != d) {
        return Err(PermError::DegreeMismatch(d, bad.degree()));
    }
    Ok(d)
}

/// Orbit of `point` under the group generated by `gens`, sorted.
pub fn orbit(gens: &[Permutation], point: usize) -> Vec<usize> {
    let d = gens.first().map_or(point + 1, |g| g.degree());
    let mut seen = vec![false; d];
    seen[point] = true;
    let mut queue = VecDeque::from([point]);
    let mut out = vec![point];
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
                queue.push_back(y);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn is_transitive(gens: &[Permutation]) -> Result<bool, PermError> {
    let d = common_degree(gens)?;
    Ok(orbit(gens, 0).len() == d)
}

/// A partition of the points into blocks of equal size.
///
/// Blocks are sorted internally and ordered by their smallest point, which
/// fixes the numbering used by [`induced_on_blocks`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockSystem {
    block_size: usize,
    blocks: Vec<Vec<usize>>,
}

impl BlockSystem {
    /// Builds a block system from a partition of `{0, .., d-1}` into
    /// equal-size parts.
    pub fn from_blocks(degree: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self, PermError> {
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut seen = vec![false; degree];
        for block in &mut blocks {
            block.sort_unstable();
            for &x in block.iter() {
                if x >= degree {
                    return Err(PermError::OutOfRange { entry: x + 1, degree });
                }
                if seen[x] {
                    return Err(PermError::RepeatedEntry(x + 1));
                }
                seen[x] = true;
            }
        }
        if seen.iter().any(|s| !s) || blocks.iter().any(|b| b.len() != blocks[0].len()) {
            return Err(PermError::Malformed { offset: 0, reason: "not an equipartition" });
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(BlockSystem { block_size: blocks[0].len(), blocks })
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn degree(&self) -> usize {
        self.block_size * self.blocks.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.block_size == 1 || self.blocks.len() == 1
    }

    /// Index of the block containing `point`.
    pub fn block_of(&self, point: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.binary_search(&point).is_ok())
            .expect("point outside block system")
    }

    pub fn is_preserved_by(&self, g: &Permutation) -> bool {
        induced_on_blocks(g, self).is_ok()
    }
}

impl fmt::Display for BlockSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in &self.blocks {
            f.write_str("{")?;
            for (i, x) in block.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // keep the smaller representative
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

/// Finest invariant partition in which all of `seeds` share a block.
fn minimal_partition(gens: &[Permutation], seeds: &[usize]) -> Vec<Vec<usize>> {
    let d = gens[0].degree();
    let mut uf = UnionFind::new(d);
    let mut pending = Vec::new();
    for &s in &seeds[1..] {
        if uf.union(seeds[0], s) {
            pending.push((seeds[0], s));
        }
    }
    while let Some((a, b)) = pending.pop() {
        for g in gens {
            let (ga, gb) = (g.apply(a), g.apply(b));
            if uf.union(ga, gb) {
                pending.push((ga, gb));
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..d {
        let r = uf.find(x);
        classes.entry(r).or_default().push(x);
    }
    classes.into_values().collect()
}

/// All block systems of a transitive group, the trivial ones included,
/// sorted by block size.
///
/// The blocks containing point 0 are the minimal blocks through `{0, β}`
/// closed under joins, so systems whose 0-block needs more than one
/// extra generator are found as well.
pub fn block_systems(gens: &[Permutation]) -> Result<Vec<BlockSystem>, PermError> {
    let d = common_degree(gens)?;
    if orbit(gens, 0).len() != d {
        return Err(PermError::NotTransitive);
    }
    let mut by_zero_block: BTreeMap<Vec<usize>, Vec<Vec<usize>>> = BTreeMap::new();
    by_zero_block.insert(vec![0], (0..d).map(|x| vec![x]).collect());
    for beta in 1..d {
        let partition = minimal_partition(gens, &[0, beta]);
        by_zero_block.insert(partition[0].clone(), partition);
    }
    loop {
        let keys: Vec<Vec<usize>> = by_zero_block.keys().cloned().collect();
        let mut added = false;
        for (i, a) in keys.iter().enumerate() {
            for b in &keys[i + 1..] {
                let seeds: BTreeSet<usize> = a.iter().chain(b.iter()).copied().collect();
                let seeds: Vec<usize> = seeds.into_iter().collect();
                let partition = minimal_partition(gens, &seeds);
                if !by_zero_block.contains_key(&partition[0]) {
                    by_zero_block.insert(partition[0].clone(), partition);
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    let mut systems: Vec<BlockSystem> = by_zero_block
        .into_values()
        .map(|p| BlockSystem::from_blocks(d, p).expect("invariant partition of a transitive group"))
        .collect();
    systems.sort();
    Ok(systems)
}

/// Action of `g` on the blocks of `bs`, blocks numbered by smallest point.
pub fn induced_on_blocks(g: &Permutation, bs: &BlockSystem) -> Result<Permutation, PermError> {
    if g.degree() != bs.degree() {
        return Err(PermError::DegreeMismatch(g.degree(), bs.degree()));
    }
    let mut owner = vec![0; bs.degree()];
    for (j, block) in bs.blocks.iter().enumerate() {
        for &x in block {
            owner[x] = j;
        }
    }
    let mut images = Vec::with_capacity(bs.num_blocks());
    for block in &bs.blocks {
        let target = owner[g.apply(block[0])];
        if block.iter().any(|&x| owner[g.apply(x)] != target) {
            return Err(PermError::BlocksNotPreserved);
        }
        images.push(target);
    }
    Permutation::from_images(images).map_err(|_| PermError::BlocksNotPreserved)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupTag {
    Cyclic,
    Alternating,
    Symmetric,
    Other,
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupTag::Cyclic => "cyclic",
            GroupTag::Alternating => "alternating",
            GroupTag::Symmetric => "symmetric",
            GroupTag::Other => "other",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupClass {
    pub tag: GroupTag,
    pub order: u64,
}

/// Base and strong generating set built by the incremental Schreier-Sims
/// algorithm.
struct StabilizerChain {
    base: Vec<usize>,
    strong: Vec<Permutation>,
    // transversals[l][y] maps base[l] to y
    transversals: Vec<Vec<Option<Permutation>>>,
    level_gens: Vec<Vec<Permutation>>,
}

impl StabilizerChain {
    fn new(gens: &[Permutation], d: usize) -> Self {
        let strong: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut chain = StabilizerChain {
            base: Vec::new(),
            strong,
            transversals: Vec::new(),
            level_gens: Vec::new(),
        };
        for g in chain.strong.clone() {
            if chain.base.iter().all(|&b| g.apply(b) == b) {
                let moved = (0..d).find(|&x| g.apply(x) != x).expect("non-identity");
                chain.base.push(moved);
            }
        }
        chain.rebuild();
        chain.complete();
        chain
    }

    fn rebuild(&mut self) {
        let d = self.strong.first().map_or(0, |g| g.degree());
        self.level_gens.clear();
        self.transversals.clear();
        for l in 0..self.base.len() {
            let gens: Vec<Permutation> = self
                .strong
                .iter()
                .filter(|g| self.base[..l].iter().all(|&b| g.apply(b) == b))
                .cloned()
                .collect();
            let b = self.base[l];
            let mut trans: Vec<Option<Permutation>> = vec![None; d];
            trans[b] = Some(Permutation::identity(d));
            let mut queue = VecDeque::from([b]);
            while let Some(x) = queue.pop_front() {
                let ux = trans[x].clone().expect("visited");
                for g in &gens {
                    let y = g.apply(x);
                    if trans[y].is_none() {
                        trans[y] = Some(g.mul(&ux));
                        queue.push_back(y);
                    }
                }
            }
            self.level_gens.push(gens);
            self.transversals.push(trans);
        }
    }

    /// Strips `g` through levels `start..`; returns the residue and the
    /// level where stripping stopped (`base.len()` when it went through).
    fn sift(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for l in start..self.base.len() {
            let y = g.apply(self.base[l]);
            match &self.transversals[l][y] {
                Some(u) => g = u.inverse().mul(&g),
                None => return (g, l),
            }
        }
        (g, self.base.len())
    }

    fn complete(&mut self) {
        let mut level = self.base.len() as isize - 1;
        while level >= 0 {
            let i = level as usize;
            let mut residue = None;
            'scan: for x in 0..self.transversals[i].len() {
                let Some(ux) = self.transversals[i][x].clone() else { continue };
                for s in &self.level_gens[i] {
                    let sx = s.apply(x);
                    let usx = self.transversals[i][sx].as_ref().expect("orbit closed");
                    let schreier = usx.inverse().mul(&s.mul(&ux));
                    let (h, j) = self.sift(schreier, i + 1);
                    if j < self.base.len() || !h.is_identity() {
                        residue = Some((h, j));
                        break 'scan;
                    }
                }
            }
            match residue {
                None => level -= 1,
                Some((h, j)) => {
                    if j == self.base.len() {
                        let moved = (0..h.degree()).find(|&x| h.apply(x) != x).expect("non-identity");
                        self.base.push(moved);
                    }
                    self.strong.push(h);
                    self.rebuild();
                    level = j as isize;
                }
            }
        }
    }

    fn order(&self) -> u64 {
        self.transversals
            .iter()
            .map(|t| t.iter().filter(|u| u.is_some()).count() as u64)
            .product()
    }
}

/// Order of the group generated by `gens`, via a stabilizer chain.
pub fn group_order(gens: &[Permutation]) -> Result<u64, PermError> {
    let d = common_degree(gens)?;
    Ok(StabilizerChain::new(gens, d).order())
}

/// All elements of the generated group by closure. Only for tiny groups.
pub fn group_elements(gens: &[Permutation]) -> Result<Vec<Permutation>, PermError> {
    let d = common_degree(gens)?;
    let id = Permutation::identity(d);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.mul(&x);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut all: Vec<Permutation> = seen.into_iter().collect();
    all.sort();
    Ok(all)
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Classifies a transitive group as cyclic (regular and generated by a
/// `d`-cycle), symmetric, alternating, or other. Cyclic takes precedence,
/// so `S_2` and `A_3` report as cyclic.
pub fn classify_group(gens: &[Permutation], bound: usize) -> Result<GroupClass, PermError> {
    let d = common_degree(gens)?;
    if d > bound {
        return Err(PermError::DegreeTooLarge { degree: d, bound });
    }
    if orbit(gens, 0).len() != d {
        return Err(PermError::NotTransitive);
    }
    let order = group_order(gens)?;
    let tag = if order == d as u64
        && group_elements(gens)?.iter().any(|g| g.single_cycle_length() == Some(d))
    {
        GroupTag::Cyclic
    } else if order == factorial(d) {
        GroupTag::Symmetric
    } else if d >= 2 && order == factorial(d) / 2 && gens.iter().all(Permutation::is_even) {
        GroupTag::Alternating
    } else {
        GroupTag::Other
    };
    Ok(GroupClass { tag, order })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, d: usize) -> Permutation {
        parse_cycles(s, d).unwrap()
    }

    #[test]
    fn parse_four_cycle() {
        let g = p("(1 2 3 4)", 5);
        assert_eq!(g.images(), &[1, 2, 3, 0, 4]);
    }

    #[test]
    fn parse_comma_separated_eight_cycle() {
        let g = p("(10,8,6,4,9,7,5,3)", 10);
        assert_eq!(g.apply(0), 0);
        assert_eq!(g.apply(1), 1);
        assert_eq!(g.single_cycle_length(), Some(8));
        assert_eq!(g.apply(9), 7);
        assert_eq!(g.apply(2), 9);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_cycles("(1 2)(2 3)", 3), Err(PermError::RepeatedEntry(2)));
        assert_eq!(parse_cycles("(1 1)", 3), Err(PermError::RepeatedEntry(1)));
        assert_eq!(parse_cycles("(1 4)", 3), Err(PermError::OutOfRange { entry: 4, degree: 3 }));
        assert_eq!(parse_cycles("(0 1)", 3), Err(PermError::OutOfRange { entry: 0, degree: 3 }));
        for bad in ["", "  ", "()", "(1 2", "1 2", "(1 2,)", "(1 2)x", "(1 2),(3 4)", "(1-2)", "(a)"] {
            assert!(matches!(parse_cycles(bad, 4), Err(PermError::Malformed { .. })), "{bad:?}");
        }
    }

    #[test]
    fn parse_whitespace_tolerance() {
        assert_eq!(p("  ( 1 , 2 ,3 )\t(4  5) ", 5), p("(1 2 3)(4 5)", 5));
        assert_eq!(p("(1,,2)", 2), p("(1 2)", 2));
        assert_eq!(p("(3)", 4), Permutation::identity(4));
    }

    #[test]
    fn display_round_trip() {
        let g = p("(5 3 1)(2 4)", 6);
        assert_eq!(g.to_string(), "(1 5 3)(2 4)");
        assert_eq!(Permutation::identity(3).to_string(), "(1)");
        assert_eq!(p(&g.to_string(), 6), g);
    }

    #[test]
    fn compose_applies_right_first() {
        let a = p("(1 2)", 3);
        let b = p("(2 3)", 3);
        // b first: 2 -> 3 -> 3, 3 -> 2 -> 1
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab, p("(1 2 3)", 3));
        assert_eq!(compose(&Permutation::identity(3), &a).unwrap(), a);
        assert_eq!(a.compose(&Permutation::identity(4)), Err(PermError::DegreeMismatch(3, 4)));
    }

    #[test]
    fn listed_tuples_have_trivial_product() {
        let ex2 = ["(1 2 3 4)", "(1 2)", "(4 3)", "(3 1)"].map(|s| p(s, 4));
        assert!(product(4, &ex2).unwrap().is_identity());
        let ex1 = ["(1 2)", "(2 3)", "(3 1)", "(2 3)"].map(|s| p(s, 3));
        assert!(product(3, &ex1).unwrap().is_identity());
        // left-to-right application would not give the identity here
        let rev: Vec<_> = ex2.iter().rev().cloned().collect();
        assert!(!product(4, &rev).unwrap().is_identity());
    }

    #[test]
    fn transitivity() {
        assert!(is_transitive(&[p("(1 2)", 3), p("(2 3)", 3)]).unwrap());
        assert!(!is_transitive(&[p("(1 2)", 3)]).unwrap());
        assert_eq!(is_transitive(&[]), Err(PermError::NoGenerators));
    }

    #[test]
    fn s3_is_primitive() {
        let systems = block_systems(&[p("(1 2)", 3), p("(2 3)", 3)]).unwrap();
        let sizes: Vec<usize> = systems.iter().map(|b| b.block_size()).collect();
        assert_eq!(sizes, vec![1, 3]);
    }

    #[test]
    fn four_cycle_blocks() {
        let systems = block_systems(&[p("(1 2 3 4)", 4)]).unwrap();
        let sizes: Vec<usize> = systems.iter().map(|b| b.block_size()).collect();
        assert_eq!(sizes, vec![1, 2, 4]);
        assert_eq!(systems[1].blocks(), &[vec![0, 2], vec![1, 3]]);
        assert_eq!(systems[1].to_string(), "{1,3}{2,4}");
    }

    #[test]
    fn block_systems_need_joins_for_elementary_abelian() {
        // regular C2^3: the size-4 blocks are not generated by a single pair
        let gens = [p("(1 2)(3 4)(5 6)(7 8)", 8), p("(1 3)(2 4)(5 7)(6 8)", 8), p("(1 5)(2 6)(3 7)(4 8)", 8)];
        let systems = block_systems(&gens).unwrap();
        let count = |m: usize| systems.iter().filter(|b| b.block_size() == m).count();
        // subgroups of C2^3: 1, 7 of order 2, 7 of order 4, 1
        assert_eq!((count(1), count(2), count(4), count(8)), (1, 7, 7, 1));
    }

    #[test]
    fn block_systems_reject_intransitive() {
        assert_eq!(block_systems(&[p("(1 2)", 3)]), Err(PermError::NotTransitive));
    }

    #[test]
    fn induced_action_on_pairs() {
        let bs = BlockSystem::from_blocks(10, (0..5).map(|i| vec![2 * i, 2 * i + 1]).collect()).unwrap();
        let s1 = p("(1,3,5,8,2,4,6,7)", 10);
        assert_eq!(induced_on_blocks(&s1, &bs).unwrap(), p("(1 2 3 4)", 5));
        let s3 = p("(10,3,1,9,4,2)(7,8)", 10);
        assert_eq!(induced_on_blocks(&s3, &bs).unwrap(), p("(5 2 1)", 5));
        assert!(induced_on_blocks(&Permutation::identity(10), &bs).unwrap().is_identity());
        assert_eq!(induced_on_blocks(&p("(2 3)", 10), &bs), Err(PermError::BlocksNotPreserved));
    }

    #[test]
    fn classify_small_groups() {
        assert_eq!(
            classify_group(&[p("(1 2 3)", 3)], 12).unwrap(),
            GroupClass { tag: GroupTag::Cyclic, order: 3 }
        );
        assert_eq!(
            classify_group(&[p("(1 2)", 3), p("(2 3)", 3)], 12).unwrap(),
            GroupClass { tag: GroupTag::Symmetric, order: 6 }
        );
        assert_eq!(
            classify_group(&[p("(1 2 3)", 5), p("(3 4 5)", 5)], 12).unwrap(),
            GroupClass { tag: GroupTag::Alternating, order: 60 }
        );
        // Klein four-group acting regularly: order d but not cyclic
        let v4 = classify_group(&[p("(1 2)(3 4)", 4), p("(1 3)(2 4)", 4)], 12).unwrap();
        assert_eq!(v4, GroupClass { tag: GroupTag::Other, order: 4 });
        assert_eq!(
            classify_group(&[p("(1 2)", 13)], 12),
            Err(PermError::DegreeTooLarge { degree: 13, bound: 12 })
        );
    }

    #[test]
    fn classify_s12_and_a12() {
        let long = Permutation::cycle(12, &(0..12).collect::<Vec<_>>()).unwrap();
        let c = classify_group(&[p("(1 2)", 12), long], 12).unwrap();
        assert_eq!(c, GroupClass { tag: GroupTag::Symmetric, order: 479_001_600 });
        let c = classify_group(&[p("(1 2 3)", 12), Permutation::cycle(12, &(1..12).collect::<Vec<_>>()).unwrap()], 12)
            .unwrap();
        assert_eq!(c, GroupClass { tag: GroupTag::Alternating, order: 239_500_800 });
    }

    #[test]
    fn cycle_queries() {
        let g = p("(1 2 3)(4 5)", 6);
        assert_eq!(g.cycle_type(), CycleType(vec![3, 2, 1]));
        assert_eq!(g.single_cycle_length(), None);
        assert_eq!(Permutation::identity(4).single_cycle_length(), Some(1));
        assert_eq!(g.order(), 6);
        assert!(!g.is_even());
    }

    #[test]
    fn serde_round_trip() {
        let g = p("(1 3)(2 5 4)", 6);
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, r#"{"degree":6,"cycles":"(1 3)(2 5 4)"}"#);
        let back: Permutation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
    }
}
