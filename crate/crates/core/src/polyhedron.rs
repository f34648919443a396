//! Locally closed rational polyhedra: finite conjunctions of strict, non-strict and
//! equality constraints on affine functionals.

use std::fmt;

use itertools::Itertools;
use num::{Signed, Zero};

use crate::fan::Cone;
use crate::linalg::{dot_ir, fmt_rat, primitive, Int, QMatrix, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Gt,
    Ge,
    Eq,
}

/// `normal . x + offset  (rel)  0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub normal: Vec<Int>,
    pub offset: Rat,
    pub rel: Relation,
}

impl Constraint {
    pub fn new(normal: Vec<Int>, offset: Rat, rel: Relation) -> Self {
        Self { normal, offset, rel }
    }

    pub fn value(&self, x: &[Rat]) -> Rat {
        dot_ir(&self.normal, x) + &self.offset
    }

    pub fn holds(&self, x: &[Rat]) -> bool {
        let v = self.value(x);
        match self.rel {
            Relation::Gt => v.is_positive(),
            Relation::Ge => !v.is_negative(),
            Relation::Eq => v.is_zero(),
        }
    }

    fn translate(&self, v: &[Rat]) -> Self {
        Self { normal: self.normal.clone(), offset: &self.offset - dot_ir(&self.normal, v), rel: self.rel }
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.rel {
            Relation::Gt => ">",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        };
        let a: Vec<String> = self.normal.iter().map(|x| x.to_string()).collect();
        write!(f, "({}).x + {} {rel} 0", a.join(","), fmt_rat(&self.offset))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LCPolyhedron {
    dim: usize,
    constraints: Vec<Constraint>,
}

impl fmt::Debug for LCPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.constraints).finish()
    }
}

impl LCPolyhedron {
    pub fn whole(dim: usize) -> Self {
        Self { dim, constraints: Vec::new() }
    }

    pub fn new(dim: usize, constraints: Vec<Constraint>) -> Self {
        debug_assert!(constraints.iter().all(|c| c.normal.len() == dim));
        Self { dim, constraints }
    }

    /// The single point `p`.
    pub fn point(p: &[Rat]) -> Self {
        let n = p.len();
        let constraints = (0..n)
            .map(|i| {
                let mut e = vec![Int::zero(); n];
                e[i] = Int::from(1);
                Constraint::new(e, -p[i].clone(), Relation::Eq)
            })
            .collect();
        Self { dim: n, constraints }
    }

    /// `cone + shift` (closed), or its interior when `open` is set.
    pub fn from_cone(cone: &Cone, shift: &[Rat], open: bool) -> Self {
        let n = cone.ambient();
        let mut cs = Vec::new();
        for a in cone.facets() {
            cs.push(Constraint::new(a.clone(), Rat::zero(), if open { Relation::Gt } else { Relation::Ge }));
        }
        for e in cone.equations() {
            cs.push(Constraint::new(e.clone(), Rat::zero(), Relation::Eq));
        }
        Self::new(n, cs).translate(shift)
    }

    /// Product of intervals; `open[i]` selects `(lo, hi)` over `[lo, hi]` per side.
    pub fn boxed(lo: &[Rat], hi: &[Rat], lo_open: &[bool], hi_open: &[bool]) -> Self {
        let n = lo.len();
        let mut cs = Vec::new();
        for i in 0..n {
            let mut e = vec![Int::zero(); n];
            e[i] = Int::from(1);
            let rel = |o: bool| if o { Relation::Gt } else { Relation::Ge };
            cs.push(Constraint::new(e.clone(), -lo[i].clone(), rel(lo_open[i])));
            cs.push(Constraint::new(e.iter().map(|x| -x).collect(), hi[i].clone(), rel(hi_open[i])));
        }
        Self::new(n, cs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.constraints.iter().all(|c| c.holds(x))
    }

    pub fn translate(&self, v: &[Rat]) -> Self {
        Self { dim: self.dim, constraints: self.constraints.iter().map(|c| c.translate(v)).collect() }
    }

    /// Image under `x -> -x`.
    pub fn neg(&self) -> Self {
        let constraints = self
            .constraints
            .iter()
            .map(|c| Constraint::new(c.normal.iter().map(|x| -x).collect(), c.offset.clone(), c.rel))
            .collect();
        Self { dim: self.dim, constraints }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut constraints = self.constraints.clone();
        constraints.extend(other.constraints.iter().cloned());
        Self { dim: self.dim, constraints }
    }

    pub fn closure(&self) -> Self {
        let constraints = self
            .constraints
            .iter()
            .map(|c| {
                let rel = if c.rel == Relation::Gt { Relation::Ge } else { c.rel };
                Constraint::new(c.normal.clone(), c.offset.clone(), rel)
            })
            .collect();
        Self { dim: self.dim, constraints }
    }

    /// `{x : normal . x (rel) 0}` over all constraints, as a closed cone.
    pub fn recession_cone(&self) -> Cone {
        let mut gens: Vec<Vec<Int>> = Vec::new();
        for c in &self.constraints {
            gens.push(c.normal.clone());
            if c.rel == Relation::Eq {
                gens.push(c.normal.iter().map(|x| -x).collect());
            }
        }
        Cone::new(self.dim, &gens).expect("constraint normals").dual()
    }

    /// Exact emptiness test by Fourier-Motzkin elimination with strictness tracking.
    pub fn is_empty(&self) -> bool {
        let n = self.dim;
        let mut rows: Vec<(Vec<Rat>, Relation)> = self
            .constraints
            .iter()
            .map(|c| {
                let mut r: Vec<Rat> = c.normal.iter().map(|x| Rat::from_integer(x.clone())).collect();
                r.push(c.offset.clone());
                (r, c.rel)
            })
            .collect();
        for var in 0..n {
            rows = fm_step(rows, var);
        }
        rows.iter().any(|(r, rel)| {
            let v = &r[n];
            match rel {
                Relation::Gt => !v.is_positive(),
                Relation::Ge => v.is_negative(),
                Relation::Eq => !v.is_zero(),
            }
        })
    }

    /// Vertices of the closure, or empty if the closure has lineality or no vertices.
    pub fn vertices(&self) -> Vec<Vec<Rat>> {
        let n = self.dim;
        let closed = self.closure();
        let mut out: Vec<Vec<Rat>> = Vec::new();
        for subset in (0..self.constraints.len()).combinations(n) {
            let a = QMatrix::from_fn(n, n, |i, j| Rat::from_integer(self.constraints[subset[i]].normal[j].clone()));
            if a.rank() < n {
                continue;
            }
            let b: Vec<Rat> = subset.iter().map(|&i| -self.constraints[i].offset.clone()).collect();
            let x = a.solve(&b).expect("nonsingular");
            if closed.contains(&x) && !out.contains(&x) {
                out.push(x);
            }
        }
        out.sort();
        out
    }

    /// Removes constraints that are implied by the others (closure-level test for
    /// non-strict ones, exact for strict ones).
    pub fn simplified(&self) -> Self {
        let mut cs: Vec<Constraint> = Vec::new();
        for c in &self.constraints {
            let c = normalize(c);
            if c.normal.iter().all(|x| x.is_zero()) {
                if c.holds(&vec![Rat::zero(); self.dim]) {
                    continue;
                }
                return Self { dim: self.dim, constraints: vec![c] };
            }
            if !cs.contains(&c) {
                cs.push(c);
            }
        }
        let mut i = 0;
        while i < cs.len() {
            let others = Self { dim: self.dim, constraints: cs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, c)| c.clone()).collect() };
            // implied iff others ∧ ¬c is empty
            let negs = negate(&cs[i]);
            let implied = negs.iter().all(|nc| others.intersect(&Self::new(self.dim, vec![nc.clone()])).is_empty());
            if implied {
                cs.remove(i);
            } else {
                i += 1;
            }
        }
        Self { dim: self.dim, constraints: cs }
    }
}

/// Scales the normal to be primitive (offset scaled accordingly).
fn normalize(c: &Constraint) -> Constraint {
    if c.normal.iter().all(|x| x.is_zero()) {
        return c.clone();
    }
    let p = primitive(&c.normal);
    let i = p.iter().position(|x| !x.is_zero()).unwrap();
    let s = Rat::new(p[i].clone(), c.normal[i].clone());
    Constraint::new(p, &c.offset * s, c.rel)
}

/// The complement of a constraint as a union of constraints.
fn negate(c: &Constraint) -> Vec<Constraint> {
    let flip = |rel| Constraint::new(c.normal.iter().map(|x| -x).collect(), -c.offset.clone(), rel);
    match c.rel {
        Relation::Gt => vec![flip(Relation::Ge)],
        Relation::Ge => vec![flip(Relation::Gt)],
        Relation::Eq => vec![flip(Relation::Gt), Constraint::new(c.normal.clone(), c.offset.clone(), Relation::Gt)],
    }
}

fn fm_step(rows: Vec<(Vec<Rat>, Relation)>, var: usize) -> Vec<(Vec<Rat>, Relation)> {
    if let Some(p) = rows.iter().position(|(r, rel)| *rel == Relation::Eq && !r[var].is_zero()) {
        let e = rows[p].0.clone();
        let ev = e[var].clone();
        return rows
            .into_iter()
            .enumerate()
            .filter(|&(i, _)| i != p)
            .map(|(_, (r, rel))| {
                if r[var].is_zero() {
                    (r, rel)
                } else {
                    let f = &r[var] / &ev;
                    (r.iter().zip(&e).map(|(a, b)| a - &f * b).collect(), rel)
                }
            })
            .collect();
    }
    let (mut out, mut pos, mut neg) = (Vec::new(), Vec::new(), Vec::new());
    for (r, rel) in rows {
        if r[var].is_zero() {
            out.push((r, rel));
        } else if r[var].is_positive() {
            pos.push((r, rel));
        } else {
            neg.push((r, rel));
        }
    }
    for (p, pr) in &pos {
        for (q, qr) in &neg {
            let a = p[var].clone();
            let b = -q[var].clone();
            let row: Vec<Rat> = p.iter().zip(q).map(|(x, y)| x * &b + y * &a).collect();
            let rel = if *pr == Relation::Gt || *qr == Relation::Gt { Relation::Gt } else { Relation::Ge };
            if !out.contains(&(row.clone(), rel)) {
                out.push((row, rel));
            }
        }
    }
    out
}
