//! Class merging over `0..n` with canonical numbering.
//!
//! The root of every class is its least member, so numbering classes in
//! order of first appearance numbers them by least member.

#[derive(Clone, Debug)]
pub struct Partition {
    parent: Vec<usize>,
}

impl Partition {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        // path compression
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, x: usize, y: usize) {
        let (a, b) = (self.find(x), self.find(y));
        if a < b {
            self.parent[b] = a;
        } else if b < a {
            self.parent[a] = b;
        }
    }

    /// Class number of every element, classes numbered by least member.
    pub fn classes(&mut self) -> Classes {
        let mut number = vec![usize::MAX; self.len()];
        let mut class_of = Vec::with_capacity(self.len());
        let mut count = 0;
        for x in 0..self.len() {
            let r = self.find(x);
            if number[r] == usize::MAX {
                number[r] = count;
                count += 1;
            }
            class_of.push(number[r]);
        }
        Classes { count, class_of }
    }
}

/// The result of a quotient: `class_of[x]` is the class of element `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classes {
    pub count: usize,
    pub class_of: Vec<usize>,
}

impl Classes {
    /// Least member of each class.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.count];
        for (x, &c) in self.class_of.iter().enumerate() {
            if reps[c] == usize::MAX {
                reps[c] = x;
            }
        }
        reps
    }

    pub fn members(&self, class: usize) -> impl Iterator<Item = usize> + '_ {
        self.class_of
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c == class)
            .map(|(x, _)| x)
    }
}
