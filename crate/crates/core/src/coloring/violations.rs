use serde::Serialize;

/// Fewest triples that any total 0/1 assignment leaves without the 101
/// pattern, together with an assignment achieving it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ViolationCount {
    pub triples: Vec<[usize; 3]>,
    pub minimum: usize,
    pub argmin: Vec<u8>,
}

/// A triple is violated iff its three values do not sum to 2.
pub fn count_violations(triples: &[[usize; 3]], values: &[u8]) -> usize {
    triples
        .iter()
        .filter(|t| t.iter().map(|&v| values[v] as u32).sum::<u32>() != 2)
        .count()
}

/// Exact minimum of [`count_violations`] over all assignments of `n` nodes.
///
/// Branch and bound over the nodes that occur in some triple, most-shared
/// nodes first. The bound is the number of triples already doomed (two 0s,
/// three 1s, or fully assigned with the wrong sum). When only one more
/// violation would tie the incumbent, every live triple must come out right,
/// so the 101 rules are propagated and any clash prunes the branch.
pub fn min_violations(n: usize, triples: &[[usize; 3]]) -> ViolationCount {
    let mut node_triples = vec![Vec::new(); n];
    for (ti, t) in triples.iter().enumerate() {
        for &v in t {
            node_triples[v].push(ti);
        }
    }
    let mut order: Vec<usize> = (0..n).filter(|&v| !node_triples[v].is_empty()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(node_triples[v].len()), v));

    let mut bb = BranchAndBound {
        triples,
        order: &order,
        best: triples.len() + 1,
        best_assignment: vec![1; n],
    };
    bb.dfs(vec![None; n], 0);
    let argmin = bb.best_assignment;
    let minimum = bb.best;
    debug_assert_eq!(count_violations(triples, &argmin), minimum);
    ViolationCount {
        triples: triples.to_vec(),
        minimum,
        argmin,
    }
}

struct BranchAndBound<'a> {
    triples: &'a [[usize; 3]],
    order: &'a [usize],
    best: usize,
    best_assignment: Vec<u8>,
}

#[derive(PartialEq)]
enum Status {
    Doomed,
    Satisfied,
    Open,
}

impl BranchAndBound<'_> {
    fn status(&self, values: &[Option<u8>], ti: usize) -> Status {
        let t = self.triples[ti];
        let zeros = t.iter().filter(|&&v| values[v] == Some(0)).count();
        let ones = t.iter().filter(|&&v| values[v] == Some(1)).count();
        if zeros >= 2 || ones == 3 {
            Status::Doomed
        } else if zeros + ones == 3 {
            Status::Satisfied
        } else {
            Status::Open
        }
    }

    fn doomed(&self, values: &[Option<u8>]) -> usize {
        (0..self.triples.len())
            .filter(|&ti| self.status(values, ti) == Status::Doomed)
            .count()
    }

    /// Forces values so that no open triple becomes doomed. Returns false
    /// when that is impossible.
    fn tighten(&self, values: &mut [Option<u8>], lb: usize) -> bool {
        loop {
            let mut changed = false;
            for ti in 0..self.triples.len() {
                if self.status(values, ti) != Status::Open {
                    continue;
                }
                let t = self.triples[ti];
                let zeros = t.iter().filter(|&&v| values[v] == Some(0)).count();
                let ones = t.iter().filter(|&&v| values[v] == Some(1)).count();
                let fill = match (zeros, ones) {
                    (1, _) => 1,
                    (0, 2) => 0,
                    _ => continue,
                };
                for &v in &t {
                    if values[v].is_none() {
                        values[v] = Some(fill);
                        changed = true;
                    }
                }
                if self.doomed(values) > lb {
                    return false;
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn dfs(&mut self, mut values: Vec<Option<u8>>, depth: usize) {
        let mut lb = self.doomed(&values);
        if lb >= self.best {
            return;
        }
        if lb + 1 == self.best {
            if !self.tighten(&mut values, lb) {
                return;
            }
            lb = self.doomed(&values);
            if lb >= self.best {
                return;
            }
        }
        let next = self.order[depth.min(self.order.len())..]
            .iter()
            .copied()
            .find(|&v| values[v].is_none());
        let Some(v) = next else {
            let total: Vec<u8> = values.iter().map(|x| x.unwrap_or(1)).collect();
            let cost = count_violations(self.triples, &total);
            if cost < self.best {
                self.best = cost;
                self.best_assignment = total;
            }
            return;
        };
        let pos = self
            .order
            .iter()
            .position(|&u| u == v)
            .expect("ordered node");
        for value in [1u8, 0] {
            let mut child = values.clone();
            child[v] = Some(value);
            self.dfs(child, pos + 1);
            if self.best == 0 {
                return;
            }
        }
    }
}
