use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("element {index} out of range for a union-find of size {len}")]
pub struct OutOfRange {
    pub index: usize,
    pub len: usize,
}

/// Disjoint-set forest with path compression and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Appends a fresh singleton set and returns its element.
    pub fn make_set(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.size.push(1);
        id
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn try_find(&mut self, x: usize) -> Result<usize, OutOfRange> {
        self.check(x)?;
        Ok(self.find(x))
    }

    /// Merges the sets of `a` and `b`; returns false if they were already
    /// in the same set.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let mut ra = self.find(a);
        let mut rb = self.find(b);
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn try_union(&mut self, a: usize, b: usize) -> Result<bool, OutOfRange> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.union(a, b))
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Size of the set containing `x`.
    pub fn set_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }

    fn check(&self, x: usize) -> Result<(), OutOfRange> {
        if x < self.parent.len() {
            Ok(())
        } else {
            Err(OutOfRange {
                index: x,
                len: self.parent.len(),
            })
        }
    }
}
