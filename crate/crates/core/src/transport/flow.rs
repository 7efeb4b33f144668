//! Dinic max-flow over an exact capacity type.

use std::collections::VecDeque;

use crate::scalar::Scalar;

/// Exact, totally ordered capacity values.
pub trait FlowValue: Clone + Ord {
    fn zero() -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
}

impl FlowValue for i128 {
    fn zero() -> Self {
        0
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
}

impl FlowValue for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
}

#[derive(Clone, Debug)]
pub struct FlowNetwork<C> {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    residual: Vec<C>,
    capacity: Vec<C>,
}

impl<C: FlowValue> FlowNetwork<C> {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            residual: Vec::new(),
            capacity: Vec::new(),
        }
    }

    pub fn nodes(&self) -> usize {
        self.head.len()
    }

    /// Adds a directed arc and returns its id.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: C) -> usize {
        let id = self.to.len();
        self.head[from].push(id);
        self.to.push(to);
        self.residual.push(cap.clone());
        self.capacity.push(cap);
        self.head[to].push(id + 1);
        self.to.push(from);
        self.residual.push(C::zero());
        self.capacity.push(C::zero());
        id
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        (self.to[edge ^ 1], self.to[edge])
    }

    /// Flow currently carried by an arc added with [`FlowNetwork::add_edge`].
    pub fn flow(&self, edge: usize) -> C {
        self.capacity[edge].minus(&self.residual[edge])
    }

    pub fn edge_count(&self) -> usize {
        self.to.len() / 2
    }

    fn levels(&self, s: usize) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.nodes()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        let zero = C::zero();
        while let Some(u) = queue.pop_front() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if level[v] == usize::MAX && self.residual[e] > zero {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    /// Pushes one blocking path from `s` to `t`; iterative to avoid deep recursion.
    fn augment(&mut self, s: usize, t: usize, level: &[usize], next: &mut [usize]) -> Option<C> {
        let zero = C::zero();
        let mut path: Vec<usize> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                let mut push = self.residual[path[0]].clone();
                for &e in &path[1..] {
                    if self.residual[e] < push {
                        push = self.residual[e].clone();
                    }
                }
                for &e in &path {
                    self.residual[e] = self.residual[e].minus(&push);
                    self.residual[e ^ 1] = self.residual[e ^ 1].plus(&push);
                }
                return Some(push);
            }
            let mut advanced = false;
            while next[u] < self.head[u].len() {
                let e = self.head[u][next[u]];
                let v = self.to[e];
                if self.residual[e] > zero && level[v] == level[u] + 1 && level[v] <= level[t] {
                    path.push(e);
                    u = v;
                    advanced = true;
                    break;
                }
                next[u] += 1;
            }
            if !advanced {
                if u == s {
                    return None;
                }
                // dead end: retreat and skip the arc that led here
                let e = path.pop().expect("non-empty path away from source");
                u = self.to[e ^ 1];
                next[u] += 1;
            }
        }
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> C {
        let mut total = C::zero();
        if s == t {
            return total;
        }
        loop {
            let level = self.levels(s);
            if level[t] == usize::MAX {
                return total;
            }
            let mut next = vec![0; self.nodes()];
            while let Some(f) = self.augment(s, t, &level, &mut next) {
                total = total.plus(&f);
            }
        }
    }

    /// Nodes reachable from `s` in the residual network.
    pub fn reachable(&self, s: usize) -> Vec<bool> {
        let level = self.levels(s);
        level.iter().map(|&l| l != usize::MAX).collect()
    }
}
