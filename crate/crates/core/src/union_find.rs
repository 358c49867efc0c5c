//! Disjoint-set forest used for every quotient computed in this crate
//! (coend classes, bar coequalizers).

/// Union by size with path halving.
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

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` if the two elements were in different classes.
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

    /// Class index of every element, numbered by first appearance in
    /// `0..len`, so the least element of each class is its representative.
    pub fn canonical_classes(&mut self) -> (Vec<usize>, Vec<usize>) {
        let n = self.len();
        let mut root_to_class = vec![usize::MAX; n];
        let mut class_of = Vec::with_capacity(n);
        let mut representatives = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            if root_to_class[r] == usize::MAX {
                root_to_class[r] = representatives.len();
                representatives.push(x);
            }
            class_of.push(root_to_class[r]);
        }
        (class_of, representatives)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singletons_initially() {
        let mut uf = UnionFind::new(4);
        for i in 0..4 {
            assert_eq!(uf.find(i), i);
        }
    }

    #[test]
    fn union_merges_and_reports() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1));
        assert!(uf.union(3, 4));
        assert!(!uf.union(1, 0));
        assert!(uf.union(1, 4));
        assert_eq!(uf.find(0), uf.find(3));
        assert_ne!(uf.find(0), uf.find(2));
    }

    #[test]
    fn canonical_classes_follow_first_appearance() {
        let mut uf = UnionFind::new(5);
        uf.union(4, 1);
        uf.union(3, 0);
        let (class_of, reps) = uf.canonical_classes();
        assert_eq!(class_of, vec![0, 1, 2, 0, 1]);
        assert_eq!(reps, vec![0, 1, 2]);
    }
}
