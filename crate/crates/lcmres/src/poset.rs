//! Finite posets with an explicit ≤-matrix: the carrier for open
//! intervals, sublevel sets, and preimage posets.

/// A finite poset. `labels[i]` keeps the identity of element i in
/// whatever structure the poset was extracted from (lattice element id,
/// subset bitmask, ...).
#[derive(Clone, Debug)]
pub struct FinitePoset {
    n: usize,
    leq: Vec<bool>,
    labels: Vec<u64>,
}

impl FinitePoset {
    /// Build from a reflexive ≤ predicate; antisymmetry and transitivity
    /// are debug-asserted.
    pub fn new(labels: Vec<u64>, leq_fn: impl Fn(usize, usize) -> bool) -> Self {
        let n = labels.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = leq_fn(i, j);
            }
        }
        let p = FinitePoset { n, leq, labels };
        debug_assert!(p.is_valid_order());
        p
    }

    pub fn empty() -> Self {
        FinitePoset {
            n: 0,
            leq: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.n + j]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    fn is_valid_order(&self) -> bool {
        for i in 0..self.n {
            if !self.leq(i, i) {
                return false;
            }
            for j in 0..self.n {
                if i != j && self.leq(i, j) && self.leq(j, i) {
                    return false;
                }
                for k in 0..self.n {
                    if self.leq(i, j) && self.leq(j, k) && !self.leq(i, k) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| (0..self.n).all(|j| !self.lt(j, i)))
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| (0..self.n).all(|j| !self.lt(i, j)))
            .collect()
    }

    /// Do the given elements admit a common upper bound inside the poset?
    pub fn bounded_above(&self, members: &[usize]) -> bool {
        (0..self.n).any(|x| members.iter().all(|&a| self.leq(a, x)))
    }

    /// Do the given elements admit a common lower bound inside the poset?
    pub fn bounded_below(&self, members: &[usize]) -> bool {
        (0..self.n).any(|x| members.iter().all(|&a| self.leq(x, a)))
    }

    /// All chains (totally ordered subsets), each as an increasing list of
    /// element indices. Includes the empty chain.
    pub fn chains(&self) -> Vec<Vec<usize>> {
        // Order elements by a linear extension so chains are generated in
        // increasing order without rescans.
        let ext = self.linear_extension();
        let mut out = vec![Vec::new()];
        let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
        while let Some((chain, start)) = stack.pop() {
            for idx in start..ext.len() {
                let e = ext[idx];
                if chain.last().is_none_or(|&last| self.lt(last, e)) {
                    let mut next = chain.clone();
                    next.push(e);
                    out.push(next.clone());
                    stack.push((next, idx + 1));
                }
            }
        }
        out
    }

    /// A linear extension: smaller elements first, deterministic.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&i| {
            let below = (0..self.n).filter(|&j| self.lt(j, i)).count();
            (below, i)
        });
        // Counting strict predecessors is a valid key: j < i implies j has
        // strictly fewer predecessors.
        order
    }
}
