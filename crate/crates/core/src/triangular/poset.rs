use std::collections::VecDeque;

/// A finite partial order on `{0, .., size - 1}` stored as its full relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    size: usize,
    leq: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PosetError {
    #[error("poset must have at least one element")]
    Empty,
    #[error("relation ({x}, {y}) refers to an element outside 0..{size}")]
    OutOfRange { x: usize, y: usize, size: usize },
    #[error("relation is not antisymmetric: {x} <= {y} <= {x}")]
    NotAntisymmetric { x: usize, y: usize },
}

impl Poset {
    /// Reflexive-transitive closure of the given `x <= y` pairs.
    pub fn from_relations(size: usize, pairs: &[(usize, usize)]) -> Result<Self, PosetError> {
        if size == 0 {
            return Err(PosetError::Empty);
        }
        let mut leq = vec![vec![false; size]; size];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(x, y) in pairs {
            if x >= size || y >= size {
                return Err(PosetError::OutOfRange { x, y, size });
            }
            leq[x][y] = true;
        }
        // Warshall
        for k in 0..size {
            for i in 0..size {
                if leq[i][k] {
                    for j in 0..size {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for x in 0..size {
            for y in x + 1..size {
                if leq[x][y] && leq[y][x] {
                    return Err(PosetError::NotAntisymmetric { x, y });
                }
            }
        }
        Ok(Poset { size, leq })
    }

    pub fn chain(n: usize) -> Result<Self, PosetError> {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_relations(n, &pairs)
    }

    pub fn antichain(n: usize) -> Result<Self, PosetError> {
        Self::from_relations(n, &[])
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    /// Whether the comparability graph is connected.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.size];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for y in 0..self.size {
                if !seen[y] && (self.leq[x][y] || self.leq[y][x]) {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_downset(&self, set: &[usize]) -> bool {
        let mut member = vec![false; self.size];
        for &x in set {
            if x >= self.size {
                return false;
            }
            member[x] = true;
        }
        (0..self.size).all(|y| !member[y] || (0..self.size).all(|x| !self.leq[x][y] || member[x]))
    }

    /// Comparable pairs `(x, y)` with `x <= y`, in lexicographic order.
    pub fn relation_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.size)
            .flat_map(|x| (0..self.size).map(move |y| (x, y)))
            .filter(|(x, y)| self.leq[*x][*y])
            .collect()
    }
}
