use std::fmt;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest graph whose stable-set number is computed on construction.
pub const MAX_CERTIFIED_VERTICES: usize = 16;

/// Simple undirected graph with 0-based vertices.
#[derive(Clone, PartialEq, Eq)]
pub struct GraphInstance {
    n: usize,
    edges: Vec<(usize, usize)>,
    /// Neighbour bitmask per vertex (graphs above 64 vertices keep `None`).
    masks: Option<Vec<u64>>,
    gamma: Option<usize>,
}

impl GraphInstance {
    /// Edges are normalized to `u < v` and deduplicated.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("graph needs at least one vertex".into()));
        }
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!("edge ({u}, {v}) outside 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        list.dedup();
        let masks = (n <= 64).then(|| {
            let mut m = vec![0u64; n];
            for &(u, v) in &list {
                m[u] |= 1 << v;
                m[v] |= 1 << u;
            }
            m
        });
        let mut g = GraphInstance {
            n,
            edges: list,
            masks,
            gamma: None,
        };
        if n <= MAX_CERTIFIED_VERTICES {
            g.gamma = Some(g.max_stable_set().len());
        }
        Ok(g)
    }

    /// Parses the `n m` header followed by `m` lines of `u v`; `#` starts a
    /// comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("graph file is empty".into()))?;
        let [n, m] = parse_pair(header, line_no)?;
        let mut edges = Vec::with_capacity(m);
        for (line_no, line) in lines {
            let [u, v] = parse_pair(line, line_no)?;
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::InvalidInput(format!(
                "graph header declares {m} edges, found {}",
                edges.len()
            )));
        }
        Self::new(n, edges)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| Error::config(path.display().to_string(), e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for (u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInput("a cycle needs at least 3 vertices".into()));
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    /// Erdős–Rényi graph with edge probability `p`, seeded.
    pub fn random(n: usize, p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidInput(format!("edge probability {p} outside [0, 1]")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        Self::new(n, edges)
    }

    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Self::new(10, outer.chain(spokes).chain(inner).collect::<Vec<_>>()).expect("valid graph")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Stable-set number `γ`, present when `n <= 16`.
    pub fn gamma(&self) -> Option<usize> {
        self.gamma
    }

    pub fn adjacency(&self) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; self.n]; self.n];
        for &(u, v) in &self.edges {
            a[u][v] = 1.0;
            a[v][u] = 1.0;
        }
        a
    }

    /// `βᵀ(I + A)β`.
    pub fn motzkin_form(&self, beta: &[f64]) -> f64 {
        let diag: f64 = beta.iter().map(|b| b * b).sum();
        let off: f64 = self.edges.iter().map(|&(u, v)| beta[u] * beta[v]).sum();
        diag + 2.0 * off
    }

    /// A maximum independent set by branch and bound: each branch either
    /// takes the lowest remaining vertex (dropping its neighbours) or skips it.
    pub fn max_stable_set(&self) -> Vec<usize> {
        let masks = self
            .masks
            .as_ref()
            .expect("stable-set search is limited to 64 vertices");
        let full = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        let mut best = 0u64;
        branch(masks, full, 0, &mut best);
        (0..self.n).filter(|i| best >> i & 1 == 1).collect()
    }
}

fn branch(masks: &[u64], candidates: u64, chosen: u64, best: &mut u64) {
    if candidates == 0 {
        if chosen.count_ones() > best.count_ones() {
            *best = chosen;
        }
        return;
    }
    if chosen.count_ones() + candidates.count_ones() <= best.count_ones() {
        return;
    }
    let v = candidates.trailing_zeros() as usize;
    let bit = 1u64 << v;
    branch(masks, candidates & !bit & !masks[v], chosen | bit, best);
    branch(masks, candidates & !bit, chosen, best);
}

fn parse_pair(line: &str, line_no: usize) -> Result<[usize; 2]> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::InvalidInput(format!("line {line_no}: `{s}` is not a vertex count or id")))
    };
    match fields.as_slice() {
        [a, b] => Ok([parse(a)?, parse(b)?]),
        _ => Err(Error::InvalidInput(format!("line {line_no}: expected two integers, got `{line}`"))),
    }
}

impl fmt::Debug for GraphInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GraphInstance")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .field("gamma", &self.gamma)
            .finish()
    }
}
