//! Vertex-group backends. Elements are plain `i64` values with `0` as the
//! identity: residues for cyclic groups, exponents for ℤ, row indices for tables.

use std::collections::VecDeque;

use serde::Serialize;

use super::WordError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GroupKind {
    Cyclic(u32),
    InfiniteCyclic,
    /// Multiplication table; `table[a][b]` is the index of `a·b`. Row and column
    /// 0 belong to the identity.
    Table(Vec<Vec<u32>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexGroup {
    kind: GroupKind,
    gens: Vec<i64>,
    /// Word length of each element for finite kinds.
    #[serde(skip)]
    lengths: Vec<u32>,
    #[serde(skip)]
    inverses: Vec<u32>,
}

impl VertexGroup {
    pub fn cyclic(n: u32) -> Result<Self, WordError> {
        Self::with_gens(GroupKind::Cyclic(n), None)
    }

    pub fn infinite_cyclic() -> Self {
        Self::with_gens(GroupKind::InfiniteCyclic, None).expect("ℤ is always valid")
    }

    pub fn table(table: Vec<Vec<u32>>) -> Result<Self, WordError> {
        Self::with_gens(GroupKind::Table(table), None)
    }

    /// Build a group with an explicit generating set. `None` picks the default:
    /// `{1}` for cyclic kinds, every non-identity element for tables.
    pub fn with_gens(kind: GroupKind, gens: Option<Vec<i64>>) -> Result<Self, WordError> {
        let order = match &kind {
            GroupKind::Cyclic(n) => {
                if *n < 2 {
                    return Err(WordError::BadGroup(format!(
                        "cyclic group order must be at least 2, got {n}"
                    )));
                }
                Some(*n as usize)
            }
            GroupKind::InfiniteCyclic => None,
            GroupKind::Table(t) => {
                validate_table(t)?;
                Some(t.len())
            }
        };
        let gens = match (gens, &kind) {
            (_, GroupKind::InfiniteCyclic) => vec![1],
            (Some(g), _) => g,
            (None, GroupKind::Cyclic(_)) => vec![1],
            (None, GroupKind::Table(t)) => (1..t.len() as i64).collect(),
        };
        let mut group = VertexGroup { kind, gens, lengths: Vec::new(), inverses: Vec::new() };
        if let Some(n) = order {
            for &g in &group.gens {
                if g <= 0 || g as usize >= n {
                    return Err(WordError::BadGroup(format!("generator {g} is not a non-identity element")));
                }
            }
            group.inverses = (0..n as i64)
                .map(|a| (0..n as i64).find(|&b| group.mul(a, b) == 0).unwrap() as u32)
                .collect();
            group.lengths = group.bfs_lengths(n)?;
        }
        Ok(group)
    }

    fn bfs_lengths(&self, n: usize) -> Result<Vec<u32>, WordError> {
        let mut steps: Vec<i64> = self.gens.clone();
        steps.extend(self.gens.iter().map(|&g| self.inv(g)));
        let mut len = vec![u32::MAX; n];
        len[0] = 0;
        let mut queue = VecDeque::from([0i64]);
        while let Some(a) = queue.pop_front() {
            for &s in &steps {
                let b = self.mul(a, s);
                if len[b as usize] == u32::MAX {
                    len[b as usize] = len[a as usize] + 1;
                    queue.push_back(b);
                }
            }
        }
        if len.contains(&u32::MAX) {
            return Err(WordError::BadGroup("generating set does not generate the group".into()));
        }
        Ok(len)
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn generators(&self) -> &[i64] {
        &self.gens
    }

    pub fn order(&self) -> Option<usize> {
        match &self.kind {
            GroupKind::Cyclic(n) => Some(*n as usize),
            GroupKind::InfiniteCyclic => None,
            GroupKind::Table(t) => Some(t.len()),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn is_abelian(&self) -> bool {
        match &self.kind {
            GroupKind::Table(t) => {
                (0..t.len()).all(|a| (0..t.len()).all(|b| t[a][b] == t[b][a]))
            }
            _ => true,
        }
    }

    /// Whether the group has order two.
    pub fn is_z2(&self) -> bool {
        self.order() == Some(2)
    }

    /// Map a raw element to its canonical value, rejecting out-of-range indices.
    pub fn normalize(&self, e: i64) -> Result<i64, WordError> {
        match &self.kind {
            GroupKind::Cyclic(n) => Ok(e.rem_euclid(*n as i64)),
            GroupKind::InfiniteCyclic => Ok(e),
            GroupKind::Table(t) => {
                if e >= 0 && (e as usize) < t.len() {
                    Ok(e)
                } else {
                    Err(WordError::BadElement(e))
                }
            }
        }
    }

    pub fn mul(&self, a: i64, b: i64) -> i64 {
        match &self.kind {
            GroupKind::Cyclic(n) => (a + b).rem_euclid(*n as i64),
            GroupKind::InfiniteCyclic => a + b,
            GroupKind::Table(t) => t[a as usize][b as usize] as i64,
        }
    }

    pub fn inv(&self, a: i64) -> i64 {
        match &self.kind {
            GroupKind::Cyclic(n) => (-a).rem_euclid(*n as i64),
            GroupKind::InfiniteCyclic => -a,
            GroupKind::Table(_) => self.inverses[a as usize] as i64,
        }
    }

    pub fn pow(&self, a: i64, k: i64) -> i64 {
        match &self.kind {
            GroupKind::Cyclic(n) => (a * k).rem_euclid(*n as i64),
            GroupKind::InfiniteCyclic => a * k,
            GroupKind::Table(_) => {
                let base = if k < 0 { self.inv(a) } else { a };
                let mut acc = 0;
                for _ in 0..k.unsigned_abs() {
                    acc = self.mul(acc, base);
                }
                acc
            }
        }
    }

    /// Word length with respect to `S_u ∪ S_u⁻¹`.
    pub fn length(&self, a: i64) -> u64 {
        match &self.kind {
            GroupKind::InfiniteCyclic => a.unsigned_abs(),
            _ => self.lengths[a as usize] as u64,
        }
    }

    /// All elements of a finite group, identity first.
    pub fn elements(&self) -> Option<Vec<i64>> {
        self.order().map(|n| (0..n as i64).collect())
    }

    /// Non-identity elements; for ℤ, the exponents `±1, …, ±k`.
    pub fn nontrivial_elements(&self, k: i64) -> Vec<i64> {
        match self.order() {
            Some(n) => (1..n as i64).collect(),
            None => (1..=k).flat_map(|e| [e, -e]).collect(),
        }
    }

    /// Order of an element; `None` for non-identity elements of ℤ.
    pub fn element_order(&self, a: i64) -> Option<u64> {
        if a == 0 {
            return Some(1);
        }
        if !self.is_finite() {
            return None;
        }
        let mut acc = a;
        let mut k = 1;
        while acc != 0 {
            acc = self.mul(acc, a);
            k += 1;
        }
        Some(k)
    }
}

fn validate_table(t: &[Vec<u32>]) -> Result<(), WordError> {
    let n = t.len();
    if n < 2 {
        return Err(WordError::BadGroup("table groups need at least two elements".into()));
    }
    for (i, row) in t.iter().enumerate() {
        if row.len() != n {
            return Err(WordError::BadGroup(format!("row {i} has {} entries, expected {n}", row.len())));
        }
        let mut seen = vec![false; n];
        for &x in row {
            if x as usize >= n || seen[x as usize] {
                return Err(WordError::BadGroup(format!("row {i} is not a permutation")));
            }
            seen[x as usize] = true;
        }
    }
    for a in 0..n {
        if t[0][a] as usize != a || t[a][0] as usize != a {
            return Err(WordError::BadGroup("index 0 is not the identity".into()));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if t[t[a][b] as usize][c] != t[a][t[b][c] as usize] {
                    return Err(WordError::BadGroup(format!("not associative at ({a},{b},{c})")));
                }
            }
        }
    }
    Ok(())
}

/// Multiplication table of the symmetric group on three letters, used in tests
/// and sample configs. Element 0 is the identity.
pub fn s3_table() -> Vec<Vec<u32>> {
    // permutations of {0,1,2} in a fixed order
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
    let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap() as u32;
    perms
        .iter()
        .map(|a| {
            perms
                .iter()
                .map(|b| idx([a[b[0]], a[b[1]], a[b[2]]]))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_lengths_use_inverses() {
        let z4 = VertexGroup::cyclic(4).unwrap();
        assert_eq!((0..4).map(|e| z4.length(e)).collect::<Vec<_>>(), vec![0, 1, 2, 1]);
        assert_eq!(z4.inv(1), 3);
        assert_eq!(z4.element_order(2), Some(2));
    }

    #[test]
    fn s3_is_a_nonabelian_group() {
        let g = VertexGroup::table(s3_table()).unwrap();
        assert!(!g.is_abelian());
        assert_eq!(g.order(), Some(6));
        for a in 0..6 {
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
    }

    #[test]
    fn bad_tables_are_rejected() {
        assert!(VertexGroup::table(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(VertexGroup::table(vec![vec![1, 0], vec![0, 1]]).is_err());
        assert!(VertexGroup::cyclic(1).is_err());
        assert!(VertexGroup::with_gens(GroupKind::Cyclic(4), Some(vec![2])).is_err());
    }
}
