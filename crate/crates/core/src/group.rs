//! Finite groups stored as Cayley tables, plus a small catalog of standard
//! groups and the subgroup/quotient machinery used by the constructions.
//!
//! Elements are dense indices `0..order`. Multiplication follows the usual
//! convention: `mul(a, b)` is the product `a·b`. For permutation groups the
//! product acts on points right-to-left, `(p·q)(i) = p(q(i))`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Errors raised when a table does not describe a group.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group table is empty")]
    Empty,
    #[error("table has {rows} rows but {labels} element labels")]
    Shape { rows: usize, labels: usize },
    #[error("table row {row} has length {len}, expected {expected}")]
    Row { row: usize, len: usize, expected: usize },
    #[error("table entry {value} at ({a}, {b}) is out of range")]
    OutOfRange { a: usize, b: usize, value: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("permutation {0:?} is not a bijection of 0..degree")]
    BadPermutation(Vec<usize>),
    #[error("unknown group element label {0:?}")]
    UnknownLabel(String),
    #[error("{0:?} is not a subgroup: {1}")]
    NotSubgroup(Vec<usize>, String),
    #[error("group action: {0}")]
    Action(String),
}

/// A finite group given by its full multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order())
            .field("labels", &self.labels)
            .finish()
    }
}

impl FiniteGroup {
    /// Builds a group from labels and a Cayley table `table[a][b] = a·b`,
    /// checking every group axiom.
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = labels.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if table.len() != n {
            return Err(GroupError::Shape { rows: table.len(), labels: n });
        }
        let mut flat = Vec::with_capacity(n * n);
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::Row { row: a, len: row.len(), expected: n });
            }
            for (b, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(GroupError::OutOfRange { a, b, value: v });
                }
                flat.push(v);
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| flat[e * n + a] == a && flat[a * n + e] == a))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| flat[a * n + b] == identity && flat[b * n + a] == identity)
                .ok_or(GroupError::NoInverse(a))?;
            inverse.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = flat[a * n + b];
                for c in 0..n {
                    if flat[ab * n + c] != flat[a * n + flat[b * n + c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(Self { labels, table: flat, identity, inverse })
    }

    /// Builds a group whose table is known to be valid; used by the catalog.
    fn from_valid_table(labels: Vec<String>, flat: Vec<usize>) -> Self {
        let n = labels.len();
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| flat[e * n + a] == a))
            .expect("catalog table has an identity");
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| flat[a * n + b] == identity).expect("catalog table has inverses"))
            .collect();
        Self { labels, table: flat, identity, inverse }
    }

    pub fn trivial() -> Self {
        Self::from_valid_table(vec!["e".into()], vec![0])
    }

    /// Cyclic group ℤ/n written additively, labels `"0".."n-1"`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let labels = (0..n).map(|k| k.to_string()).collect();
        let flat = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
        Self::from_valid_table(labels, flat)
    }

    /// Dihedral group of order `2n`: elements `r^k s^e`, with `s r s = r⁻¹`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n > 0, "dihedral group needs n >= 1");
        let label = |k: usize, e: usize| {
            let r = match k {
                0 => String::new(),
                1 => "r".to_string(),
                _ => format!("r^{k}"),
            };
            match (r.is_empty(), e) {
                (true, 0) => "e".to_string(),
                (_, 0) => r,
                _ => format!("{r}s"),
            }
        };
        let idx = |k: usize, e: usize| e * n + k;
        let mut labels = vec![String::new(); 2 * n];
        let mut flat = vec![0; 4 * n * n];
        for e in 0..2 {
            for a in 0..n {
                labels[idx(a, e)] = label(a, e);
                for f in 0..2 {
                    for b in 0..n {
                        // (r^a s^e)(r^b s^f) = r^(a ± b) s^(e+f)
                        let k = if e == 0 { (a + b) % n } else { (a + n - b) % n };
                        flat[idx(a, e) * 2 * n + idx(b, f)] = idx(k, (e + f) % 2);
                    }
                }
            }
        }
        Self::from_valid_table(labels, flat)
    }

    /// Symmetric group on `n` points, elements sorted lexicographically in
    /// one-line notation.
    pub fn symmetric(n: usize) -> Self {
        let mut perms = vec![(0..n).collect::<Vec<_>>()];
        let mut out = Vec::new();
        while let Some(p) = perms.pop() {
            out.push(p.clone());
            if let Some(next) = next_permutation(&p) {
                perms.push(next);
            }
        }
        Self::from_permutation_list(n, out)
    }

    /// The subgroup of `Sym(degree)` generated by `generators` (one-line
    /// notation, 0-based). Elements are sorted lexicographically, so the
    /// identity is element 0. Labels are 1-based cycle notation.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self, GroupError> {
        for g in generators {
            if !is_permutation(g, degree) {
                return Err(GroupError::BadPermutation(g.clone()));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(id.clone());
        let mut frontier = vec![id];
        while let Some(p) = frontier.pop() {
            for g in generators {
                let q = compose_perm(g, &p);
                if seen.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        Ok(Self::from_permutation_list(degree, seen.into_iter().collect()))
    }

    fn from_permutation_list(degree: usize, mut perms: Vec<Vec<usize>>) -> Self {
        perms.sort();
        let index: HashMap<&[usize], usize> =
            perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let n = perms.len();
        let mut flat = Vec::with_capacity(n * n);
        for p in &perms {
            for q in &perms {
                flat.push(index[compose_perm(p, q).as_slice()]);
            }
        }
        let labels = perms.iter().map(|p| cycle_notation(p, degree)).collect();
        Self::from_valid_table(labels, flat)
    }

    /// `GL₂(𝔽₂)`, the invertible 2×2 matrices over the field with two
    /// elements. Labels are row-major bit strings such as `"10;01"`.
    pub fn gl2_f2() -> Self {
        let mut mats = Vec::new();
        for bits in 0u8..16 {
            let m = [[bits >> 3 & 1, bits >> 2 & 1], [bits >> 1 & 1, bits & 1]];
            if (m[0][0] * m[1][1] + m[0][1] * m[1][0]) % 2 == 1 {
                mats.push(m);
            }
        }
        // Identity first.
        mats.sort_by_key(|m| (*m != [[1, 0], [0, 1]], *m));
        let mul = |a: &[[u8; 2]; 2], b: &[[u8; 2]; 2]| {
            let mut c = [[0u8; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    c[i][j] = (a[i][0] * b[0][j] + a[i][1] * b[1][j]) % 2;
                }
            }
            c
        };
        let n = mats.len();
        let mut flat = Vec::with_capacity(n * n);
        for a in &mats {
            for b in &mats {
                let c = mul(a, b);
                flat.push(mats.iter().position(|m| *m == c).expect("closed under product"));
            }
        }
        let labels = mats
            .iter()
            .map(|m| format!("{}{};{}{}", m[0][0], m[0][1], m[1][0], m[1][1]))
            .collect();
        Self::from_valid_table(labels, flat)
    }

    /// Direct product `G × H`; element `(g, h)` has index `g·|H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let (ng, nh) = (g.order(), h.order());
        let mut labels = Vec::with_capacity(ng * nh);
        for a in 0..ng {
            for b in 0..nh {
                labels.push(format!("({},{})", g.label(a), h.label(b)));
            }
        }
        let mut flat = Vec::with_capacity(ng * nh * ng * nh);
        for a1 in 0..ng {
            for b1 in 0..nh {
                for a2 in 0..ng {
                    for b2 in 0..nh {
                        flat.push(g.mul(a1, a2) * nh + h.mul(b1, b2));
                    }
                }
            }
        }
        Self::from_valid_table(labels, flat)
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The Cayley table as rows, `rows[a][b] = a·b`.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order()).map(|r| r.to_vec()).collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `x ↦ g x g⁻¹`.
    pub fn conjugation(&self, g: usize) -> Vec<usize> {
        let gi = self.inv(g);
        self.elements().map(|x| self.mul(self.mul(g, x), gi)).collect()
    }

    /// `x ↦ x⁻¹`; an automorphism only for abelian groups.
    pub fn inversion(&self) -> Vec<usize> {
        self.inverse.clone()
    }

    pub fn identity_map(&self) -> Vec<usize> {
        self.elements().collect()
    }

    pub fn is_homomorphism_to(&self, target: &FiniteGroup, map: &[usize]) -> bool {
        map.len() == self.order()
            && map.iter().all(|&x| x < target.order())
            && self.elements().all(|a| {
                self.elements()
                    .all(|b| map[self.mul(a, b)] == target.mul(map[a], map[b]))
            })
    }

    pub fn is_automorphism(&self, map: &[usize]) -> bool {
        self.is_homomorphism_to(self, map) && is_permutation(map, self.order())
    }

    /// An automorphism `θ` with `θ∘θ = id`.
    pub fn is_involution(&self, map: &[usize]) -> bool {
        self.is_automorphism(map) && self.elements().all(|a| map[map[a]] == a)
    }

    /// Smallest subgroup containing `generators`.
    pub fn closure(&self, generators: &[usize]) -> Subgroup {
        let mut seen = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in generators {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Subgroup { elements: seen.into_iter().collect() }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { elements: self.elements().collect() }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elements: vec![self.identity] }
    }

    /// All subgroups, sorted by element list. Brute force over generating
    /// pairs, which suffices for the 2-generated groups of the catalog.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut layer: Vec<Subgroup> = vec![self.trivial_subgroup()];
        found.insert(vec![self.identity]);
        // Grow by adjoining one element at a time until closure.
        while let Some(h) = layer.pop() {
            for g in self.elements() {
                if h.contains(g) {
                    continue;
                }
                let mut gens = h.elements.clone();
                gens.push(g);
                let k = self.closure(&gens);
                if found.insert(k.elements.clone()) {
                    layer.push(k);
                }
            }
        }
        found.into_iter().map(|elements| Subgroup { elements }).collect()
    }
}

/// A subgroup stored as a sorted list of element ids of its parent group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    /// Checks closure, identity and inverses; the error names the first
    /// failure.
    pub fn new(group: &FiniteGroup, elements: &[usize]) -> Result<Self, GroupError> {
        let mut elems: Vec<usize> = elements.to_vec();
        elems.sort_unstable();
        elems.dedup();
        let fail = |why: String| Err(GroupError::NotSubgroup(elems.clone(), why));
        if let Some(&x) = elems.iter().find(|&&x| x >= group.order()) {
            return fail(format!("element {x} out of range"));
        }
        if elems.binary_search(&group.identity()).is_err() {
            return fail("missing identity".into());
        }
        for &a in &elems {
            if elems.binary_search(&group.inv(a)).is_err() {
                return fail(format!("inverse of {} missing", group.label(a)));
            }
            for &b in &elems {
                if elems.binary_search(&group.mul(a, b)).is_err() {
                    return fail(format!("{}·{} not in subset", group.label(a), group.label(b)));
                }
            }
        }
        Ok(Self { elements: elems })
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    /// Position of a parent element inside this subgroup's own numbering.
    pub fn position(&self, g: usize) -> Option<usize> {
        self.elements.binary_search(&g).ok()
    }

    /// The subgroup as a group in its own right, numbered by position in
    /// `elements()`; the returned vector is the embedding into the parent.
    pub fn as_group(&self, parent: &FiniteGroup) -> (FiniteGroup, Vec<usize>) {
        let n = self.order();
        let labels = self.elements.iter().map(|&g| parent.label(g).to_string()).collect();
        let mut flat = Vec::with_capacity(n * n);
        for &a in &self.elements {
            for &b in &self.elements {
                flat.push(self.position(parent.mul(a, b)).expect("subgroup is closed"));
            }
        }
        (FiniteGroup::from_valid_table(labels, flat), self.elements.clone())
    }

    pub fn is_normal_in(&self, parent: &FiniteGroup) -> Option<(usize, usize)> {
        for g in parent.elements() {
            for &n in &self.elements {
                let c = parent.mul(parent.mul(g, n), parent.inv(g));
                if !self.contains(c) {
                    return Some((g, n));
                }
            }
        }
        None
    }

    pub fn is_stable_under(&self, map: &[usize]) -> bool {
        self.elements.iter().all(|&g| self.contains(map[g]))
    }

    /// The quotient `G/N` by this (normal) subgroup. Cosets are numbered by
    /// their minimal element; the second component maps each element of `G`
    /// to its coset.
    pub fn quotient(&self, parent: &FiniteGroup) -> (FiniteGroup, Vec<usize>) {
        let mut coset_of = vec![usize::MAX; parent.order()];
        let mut reps = Vec::new();
        for g in parent.elements() {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(g);
            for &n in &self.elements {
                coset_of[parent.mul(g, n)] = c;
            }
        }
        let k = reps.len();
        let mut flat = Vec::with_capacity(k * k);
        for &a in &reps {
            for &b in &reps {
                flat.push(coset_of[parent.mul(a, b)]);
            }
        }
        let labels = reps.iter().map(|&g| format!("{}N", parent.label(g))).collect();
        (FiniteGroup::from_valid_table(labels, flat), coset_of)
    }
}

/// A left action of a finite group on a finite set of labelled points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    group: FiniteGroup,
    carrier: Vec<String>,
    table: Vec<usize>,
}

/// An orbit with its representative (the minimal point) and the stabilizer
/// of that representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub representative: usize,
    pub members: Vec<usize>,
    pub stabilizer: Subgroup,
}

impl GroupAction {
    /// `act(g, x)` is looked up as `table[g·|carrier| + x]`.
    pub fn new(group: FiniteGroup, carrier: Vec<String>, act: impl Fn(usize, usize) -> usize) -> Result<Self, GroupError> {
        let n = carrier.len();
        let mut table = Vec::with_capacity(group.order() * n);
        for g in group.elements() {
            for x in 0..n {
                let y = act(g, x);
                if y >= n {
                    return Err(GroupError::Action(format!("act({g}, {x}) = {y} out of range")));
                }
                table.push(y);
            }
        }
        let a = Self { group, carrier, table };
        a.check()?;
        Ok(a)
    }

    fn check(&self) -> Result<(), GroupError> {
        let g = &self.group;
        for x in 0..self.len() {
            if self.act(g.identity(), x) != x {
                return Err(GroupError::Action(format!("identity moves point {x}")));
            }
            for a in g.elements() {
                for b in g.elements() {
                    if self.act(a, self.act(b, x)) != self.act(g.mul(a, b), x) {
                        return Err(GroupError::Action(format!(
                            "act({a}, act({b}, {x})) != act({a}·{b}, {x})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The group acting on itself by left multiplication.
    pub fn left_multiplication(group: &FiniteGroup) -> Self {
        let carrier = group.labels().to_vec();
        Self::new(group.clone(), carrier, |g, x| group.mul(g, x)).expect("left multiplication is an action")
    }

    /// The trivial action on a single point.
    pub fn on_point(group: &FiniteGroup) -> Self {
        Self::new(group.clone(), vec!["*".into()], |_, _| 0).expect("trivial action")
    }

    /// Left multiplication on the left cosets `G/H`, numbered by minimal
    /// element.
    pub fn on_cosets(group: &FiniteGroup, subgroup: &Subgroup) -> Self {
        let mut coset_of = vec![usize::MAX; group.order()];
        let mut reps = Vec::new();
        for g in group.elements() {
            if coset_of[g] == usize::MAX {
                for &h in subgroup.elements() {
                    coset_of[group.mul(g, h)] = reps.len();
                }
                reps.push(g);
            }
        }
        let carrier = reps.iter().map(|&g| format!("{}H", group.label(g))).collect();
        Self::new(group.clone(), carrier, |g, c| coset_of[group.mul(g, reps[c])]).expect("coset action")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.table[g * self.carrier.len() + x]
    }

    pub fn stabilizer(&self, x: usize) -> Subgroup {
        Subgroup {
            elements: self.group.elements().filter(|&g| self.act(g, x) == x).collect(),
        }
    }

    /// Orbits ordered by representative, each representative being the
    /// minimal point of its orbit.
    pub fn orbits(&self) -> Vec<Orbit> {
        let mut done = vec![false; self.len()];
        let mut out = Vec::new();
        for x in 0..self.len() {
            if done[x] {
                continue;
            }
            let members: BTreeSet<usize> = self.group.elements().map(|g| self.act(g, x)).collect();
            for &m in &members {
                done[m] = true;
            }
            out.push(Orbit {
                representative: x,
                members: members.into_iter().collect(),
                stabilizer: self.stabilizer(x),
            });
        }
        out
    }

    /// A point fixed by a non-identity element of `elements`, if any.
    pub fn free_witness(&self, elements: &[usize]) -> Option<(usize, usize)> {
        for x in 0..self.len() {
            for &g in elements {
                if g != self.group.identity() && self.act(g, x) == x {
                    return Some((g, x));
                }
            }
        }
        None
    }
}

pub(crate) fn is_permutation(p: &[usize], n: usize) -> bool {
    if p.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &x in p {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// `(p·q)(i) = p(q(i))`.
fn compose_perm(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

fn next_permutation(p: &[usize]) -> Option<Vec<usize>> {
    let mut v = p.to_vec();
    let i = (1..v.len()).rev().find(|&i| v[i - 1] < v[i])?;
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1])?;
    v.swap(i - 1, j);
    v[i..].reverse();
    Some(v)
}

fn cycle_notation(p: &[usize], n: usize) -> String {
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push((i + 1).to_string());
            i = p[i];
        }
        out.push('(');
        out.push_str(&cycle.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}
