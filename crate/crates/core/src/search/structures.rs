//! Working state of a perturbation: vertex-disjoint paths and cycles made of
//! active edges, merged by a single sweep over the graph edges.

use rand::Rng;

use crate::graph::Graph;
use crate::partition::{paths_from_links, PathPartition, NO_LINK};
use crate::union_find::UnionFind;

/// How to pick which of the two cycle edges at a vertex is deactivated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CycleEdgeChoice {
    /// Uniformly at random from the solver's stream.
    #[default]
    Random,
    /// Always the edge stored first (deterministic without consuming randomness).
    First,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub(crate) struct SweepStats {
    pub path_path: usize,
    pub path_cycle: usize,
    pub cycle_cycle: usize,
}

pub(crate) struct Structures {
    link: Vec<[usize; 2]>,
    sets: UnionFind,
    cycle: Vec<bool>,
    count: usize,
}

impl Structures {
    pub fn from_partition(pp: &PathPartition) -> Self {
        let n = pp.n();
        let mut link = vec![[NO_LINK; 2]; n];
        let mut sets = UnionFind::new(n);
        for p in pp.paths() {
            for w in p.windows(2) {
                push_link(&mut link[w[0]], w[1]);
                push_link(&mut link[w[1]], w[0]);
                sets.union(w[0], w[1]);
            }
        }
        Structures {
            link,
            sets,
            cycle: vec![false; n],
            count: pp.path_count(),
        }
    }

    /// Number of structures (paths plus cycles).
    #[cfg(test)]
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn cycle_count(&mut self) -> usize {
        let n = self.link.len();
        (0..n)
            .filter(|&v| self.sets.find(v) == v && self.cycle[v])
            .count()
    }

    fn degree(&self, v: usize) -> usize {
        self.link[v].iter().filter(|&&x| x != NO_LINK).count()
    }

    fn is_cycle(&mut self, v: usize) -> bool {
        let r = self.sets.find(v);
        self.cycle[r]
    }

    fn activate(&mut self, a: usize, b: usize) {
        push_link(&mut self.link[a], b);
        push_link(&mut self.link[b], a);
    }

    fn deactivate(&mut self, a: usize, b: usize) {
        drop_link(&mut self.link[a], b);
        drop_link(&mut self.link[b], a);
    }

    fn merge(&mut self, a: usize, b: usize) {
        self.sets.union(a, b);
        let r = self.sets.find(a);
        self.cycle[r] = false;
        self.count -= 1;
    }

    fn pick_cycle_neighbor<R: Rng>(&self, v: usize, choice: CycleEdgeChoice, rng: &mut R) -> usize {
        match choice {
            CycleEdgeChoice::First => self.link[v][0],
            CycleEdgeChoice::Random => self.link[v][rng.gen_range(0..2)],
        }
    }

    /// Turns every path of at least three vertices whose endpoints are
    /// adjacent in `g` into a cycle.
    pub fn close_paths(&mut self, g: &Graph, pp: &PathPartition) {
        for p in pp.paths() {
            if p.len() < 3 {
                continue;
            }
            let (s, e) = (p[0], p[p.len() - 1]);
            if g.has_edge(s, e) {
                self.activate(s, e);
                let r = self.sets.find(s);
                self.cycle[r] = true;
            }
        }
    }

    /// One pass over the edges of `g` in ascending order, joining distinct
    /// structures at the edge endpoints: path end to path end, path end to
    /// any cycle vertex, and cycle to cycle. With `paths_only` only the
    /// first kind is used.
    pub fn sweep<R: Rng>(
        &mut self,
        g: &Graph,
        choice: CycleEdgeChoice,
        paths_only: bool,
        rng: &mut R,
    ) -> SweepStats {
        let mut stats = SweepStats::default();
        for e in g.edges() {
            let (u, v) = (e.u, e.v);
            if self.sets.find(u) == self.sets.find(v) {
                continue;
            }
            let cu = self.is_cycle(u);
            let cv = self.is_cycle(v);
            match (cu, cv) {
                (false, false) => {
                    if self.degree(u) <= 1 && self.degree(v) <= 1 {
                        self.activate(u, v);
                        self.merge(u, v);
                        stats.path_path += 1;
                    }
                }
                (false, true) | (true, false) if !paths_only => {
                    let (p, c) = if cu { (v, u) } else { (u, v) };
                    if self.degree(p) <= 1 {
                        let drop = self.pick_cycle_neighbor(c, choice, rng);
                        self.deactivate(c, drop);
                        self.activate(p, c);
                        self.merge(p, c);
                        stats.path_cycle += 1;
                    }
                }
                (true, true) if !paths_only => {
                    let du = self.pick_cycle_neighbor(u, choice, rng);
                    let dv = self.pick_cycle_neighbor(v, choice, rng);
                    self.deactivate(u, du);
                    self.deactivate(v, dv);
                    self.activate(u, v);
                    self.merge(u, v);
                    stats.cycle_cycle += 1;
                }
                _ => {}
            }
        }
        stats
    }

    /// Opens every remaining cycle at one of its edges.
    pub fn break_cycles<R: Rng>(&mut self, choice: CycleEdgeChoice, rng: &mut R) {
        let n = self.link.len();
        let mut done = vec![false; n];
        for v in 0..n {
            let r = self.sets.find(v);
            if !self.cycle[r] || done[r] {
                continue;
            }
            done[r] = true;
            let size = self.sets.set_size(r);
            let steps = match choice {
                CycleEdgeChoice::First => 0,
                CycleEdgeChoice::Random => rng.gen_range(0..size),
            };
            // Walk from the smallest vertex of the cycle.
            let mut prev = self.link[v][1];
            let mut cur = v;
            for _ in 0..steps {
                let next = if self.link[cur][0] != prev {
                    self.link[cur][0]
                } else {
                    self.link[cur][1]
                };
                prev = cur;
                cur = next;
            }
            let next = if self.link[cur][0] != prev {
                self.link[cur][0]
            } else {
                self.link[cur][1]
            };
            self.deactivate(cur, next);
            self.cycle[r] = false;
        }
    }

    /// Current paths; every cycle must have been broken first.
    pub fn into_partition(mut self) -> PathPartition {
        debug_assert_eq!(self.cycle_count(), 0);
        let n = self.link.len();
        let mut work = 0;
        let paths = paths_from_links(&self.link, &mut work);
        PathPartition::from_paths_unchecked(n, paths)
    }
}

fn push_link(slots: &mut [usize; 2], x: usize) {
    if slots[0] == NO_LINK {
        slots[0] = x;
    } else {
        debug_assert_eq!(slots[1], NO_LINK, "vertex already has two active edges");
        slots[1] = x;
    }
}

fn drop_link(slots: &mut [usize; 2], x: usize) {
    if slots[0] == x {
        slots[0] = slots[1];
        slots[1] = NO_LINK;
    } else {
        debug_assert_eq!(slots[1], x);
        slots[1] = NO_LINK;
    }
}

/// Greedily joins paths whose endpoints are adjacent in `g`. The result
/// never has more paths than `pp`.
pub fn join_adjacent_endpoints(g: &Graph, pp: &PathPartition) -> PathPartition {
    let mut s = Structures::from_partition(pp);
    let mut unused = rand::rngs::mock::StepRng::new(0, 0);
    s.sweep(g, CycleEdgeChoice::First, true, &mut unused);
    s.into_partition()
}
