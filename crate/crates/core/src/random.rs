//! Seeded sampling of points, divisors and functions in R(D).
//!
//! The generator is SplitMix64; a draw in `0..n` is `next_u64() % n`, so
//! sweeps are reproducible from the seed alone.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::Result;
use crate::graph::{Divisor, EdgeId, MetricGraph, Point};
use crate::plfunc::{min_combination, PlFunction};
use crate::rational::{q, Q};
use crate::reduce::v_reduce;

pub struct Sampler {
    rng: SplitMix64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: SplitMix64::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        &xs[self.below(xs.len() as u64) as usize]
    }

    /// A point at offset `k/den` of the length along a random edge.
    pub fn point(&mut self, graph: &MetricGraph, den: i64) -> Point {
        let e = EdgeId(self.below(graph.edge_count() as u64) as usize);
        let k = self.range(0, den);
        let offset = &graph.edge(e).length * q(k, den);
        graph.point(e, offset).expect("offset within edge")
    }

    pub fn effective(&mut self, graph: &MetricGraph, degree: i64, den: i64) -> Divisor {
        let mut d = Divisor::zero();
        for _ in 0..degree {
            d.add_point(self.point(graph, den), 1);
        }
        d
    }

    /// A divisor of the given degree, with up to `negatives` extra chips of each sign.
    pub fn divisor(&mut self, graph: &MetricGraph, degree: i64, negatives: i64, den: i64) -> Divisor {
        let extra = self.range(0, negatives.max(0));
        let pos = (degree + extra).max(0);
        let neg = pos - degree;
        let mut d = self.effective(graph, pos, den);
        for _ in 0..neg {
            d.add_point(self.point(graph, den), -1);
        }
        d
    }

    /// An offset `k/den` with `|k| <= span·den`.
    pub fn offset(&mut self, span: i64, den: i64) -> Q {
        q(self.range(-span * den, span * den), den)
    }

    /// A random element of R(D) for effective `d`: a shifted minimum of
    /// reduction witnesses at random points.
    pub fn in_r(&mut self, graph: &MetricGraph, d: &Divisor, den: i64) -> Result<PlFunction> {
        let count = self.range(1, 3) as usize;
        let mut fs = Vec::with_capacity(count);
        let mut b = Vec::with_capacity(count);
        for _ in 0..count {
            let base = self.point(graph, den);
            fs.push(v_reduce(graph, d, &base)?.witness);
            b.push(self.offset(2, den));
        }
        min_combination(graph, &fs, &b)
    }

    /// `steps` steps of a walk through the effective divisors equivalent to
    /// `d`, each replacing the current divisor by a random element of R of it.
    /// Returns the endpoint and `ψ` with `endpoint = d + div ψ`.
    pub fn walk(&mut self, graph: &MetricGraph, d: &Divisor, steps: usize, den: i64) -> Result<(Divisor, PlFunction)> {
        let mut cur = d.clone();
        let mut total = PlFunction::zero(graph);
        for _ in 0..steps {
            let f = self.in_r(graph, &cur, den)?;
            cur = &cur + &f.divisor(graph);
            total = total.add(&f);
        }
        Ok((cur, total))
    }
}
