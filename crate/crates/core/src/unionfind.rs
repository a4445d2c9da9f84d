//! Union-find with path halving and union by size.

#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
    sets: usize,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            sets: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            self.parent[x] = self.parent[self.parent[x] as usize];
            x = self.parent[x] as usize;
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let mut ra = self.find(a);
        let mut rb = self.find(b);
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.size[ra] += self.size[rb];
        self.parent[rb] = ra as u32;
        self.sets -= 1;
        true
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Maps every item to a dense component id; ids are ordered by the
    /// smallest member of each component.
    pub fn component_ids(&mut self) -> (Vec<u32>, usize) {
        let n = self.len();
        let mut id = vec![u32::MAX; n];
        let mut next = 0u32;
        for x in 0..n {
            let r = self.find(x);
            if id[r] == u32::MAX {
                id[r] = next;
                next += 1;
            }
            id[x] = id[r];
        }
        (id, next as usize)
    }
}
