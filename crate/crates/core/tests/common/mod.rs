//! Random frames with prescribed world-local properties, built by closing
//! random neighbourhoods under each condition written out directly.

#![allow(dead_code)]

use std::collections::BTreeSet;

use deontic_core::frames::{check_property, FrameProperty};
use deontic_core::model::{BoxOp, Frame, WorldSet};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

struct World {
    n: usize,
    o: Vec<bool>,
    p: Vec<bool>,
}

impl World {
    fn full(&self) -> usize {
        (1 << self.n) - 1
    }

    fn comp(&self, x: usize) -> usize {
        self.full() & !x
    }

    fn subsets(&self) -> std::ops::Range<usize> {
        0..1 << self.n
    }

    fn weak(&self, z: usize) -> bool {
        !self.o[self.comp(z)]
    }

    fn close_up(v: &mut [bool]) -> bool {
        let mut changed = false;
        for x in 0..v.len() {
            if v[x] {
                for (y, inside) in v.iter_mut().enumerate() {
                    if y & x == x && !*inside {
                        *inside = true;
                        changed = true;
                    }
                }
            }
        }
        changed
    }

    /// Subsets of `x`.
    fn below(x: usize) -> impl Iterator<Item = usize> {
        (0..=x).filter(move |z| z & x == *z)
    }

    /// One pass of the N_P conditions; returns whether anything was added.
    fn close_p(&mut self, props: &BTreeSet<FrameProperty>) -> bool {
        use FrameProperty as F;
        let mut add = vec![];
        for x in self.subsets() {
            for y in self.subsets() {
                if !self.p[x | y] {
                    continue;
                }
                if props.contains(&F::AFCPO) && self.o[self.comp(y)] {
                    add.push(x);
                }
                if props.contains(&F::AFCPP) && self.weak(x) && self.weak(y) {
                    add.extend([x, y]);
                }
                if props.contains(&F::AFCP2P) && self.weak(x) {
                    add.push(x);
                }
                if props.contains(&F::IFCPO) && Self::below(self.comp(y)).any(|z| self.o[z]) {
                    add.push(x);
                }
                if props.contains(&F::IFCPP)
                    && Self::below(x).any(|z| self.weak(z))
                    && Self::below(y).any(|q| self.weak(q))
                {
                    add.extend([x, y]);
                }
                if props.contains(&F::IFCP2P) && Self::below(x).any(|z| self.weak(z)) {
                    add.push(x);
                }
            }
        }
        let mut changed = false;
        for x in add {
            if !self.p[x] {
                self.p[x] = true;
                changed = true;
            }
        }
        if props.contains(&F::PSupplemented) {
            changed |= Self::close_up(&mut self.p);
        }
        changed
    }

    fn coherent(&self, props: &BTreeSet<FrameProperty>) -> bool {
        let pw = !props.contains(&FrameProperty::PwCoherent)
            || self.subsets().all(|x| !(self.o[x] && self.o[self.comp(x)]));
        let ps = !props.contains(&FrameProperty::PsCoherent)
            || self.subsets().all(|x| !(self.p[x] && self.o[self.comp(x)]));
        pw && ps
    }
}

fn random_world(rng: &mut StdRng, n: usize, props: &BTreeSet<FrameProperty>) -> World {
    loop {
        let size = 1 << n;
        let density_o = rng.gen_range(0.0..0.3);
        let density_p = rng.gen_range(0.0..0.3);
        let mut w = World {
            n,
            o: (0..size).map(|_| rng.gen_bool(density_o)).collect(),
            p: (0..size).map(|_| rng.gen_bool(density_p)).collect(),
        };
        if props.contains(&FrameProperty::OSupplemented) {
            World::close_up(&mut w.o);
        }
        while w.close_p(props) {}
        if w.coherent(props) {
            return w;
        }
    }
}

/// A random frame with 1..=max_worlds worlds satisfying every property in
/// `props`.
pub fn random_frame(rng: &mut StdRng, max_worlds: usize, props: &BTreeSet<FrameProperty>) -> Frame {
    let n = rng.gen_range(1..=max_worlds);
    let mut f = Frame::with_size(n);
    for w in 0..n {
        let world = random_world(rng, n, props);
        for (op, v) in [(BoxOp::Obl, &world.o), (BoxOp::PermS, &world.p)] {
            for (x, &inside) in v.iter().enumerate() {
                if inside {
                    f.nbhd_mut(op, w).insert(WorldSet(x as u64));
                }
            }
        }
    }
    for &p in props {
        assert!(
            check_property(&f, p).unwrap().is_satisfied(),
            "generator broke {p}"
        );
    }
    f
}

pub fn props(list: &[FrameProperty]) -> BTreeSet<FrameProperty> {
    list.iter().copied().collect()
}
