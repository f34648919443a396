use std::collections::BTreeSet;
use std::fmt;

use num::{Signed, Zero};

use crate::linalg::{
    dot_int, dot_ir, hermite_rows, kernel_basis, primitive, primitive_rat, sign_normalize, Int, IntMatrix, Rat,
};

use super::FanError;

/// Rational polyhedral cone with both representations.
///
/// `ineqs` are the facet normals `a` (meaning `a . x >= 0`), canonical modulo the
/// linear span; `eqs` is a Hermite basis of the orthogonal complement of the span.
#[derive(Clone)]
pub struct Cone {
    ambient: usize,
    gens: Vec<Vec<Int>>,
    ineqs: Vec<Vec<Int>>,
    eqs: Vec<Vec<Int>>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Eq,
    Ge,
}

impl Cone {
    pub fn new(ambient: usize, generators: &[Vec<Int>]) -> Result<Self, FanError> {
        if let Some(g) = generators.iter().find(|g| g.len() != ambient) {
            return Err(FanError::Dimension(format!("generator {g:?} has length {} in ambient {ambient}", g.len())));
        }
        let mut gens: Vec<Vec<Int>> = generators
            .iter()
            .filter(|g| g.iter().any(|x| !x.is_zero()))
            .map(|g| primitive(g))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let eqs = hermite_rows(&kernel_basis(&IntMatrix::from_int_rows(&gens, ambient)), ambient);
        let mut ineqs = facets(&gens, &eqs, ambient);
        // drop generators implied by the others
        let mut i = 0;
        while i < gens.len() {
            let others: Vec<Vec<Int>> = gens.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect();
            let oe = hermite_rows(&kernel_basis(&IntMatrix::from_int_rows(&others, ambient)), ambient);
            let oi = facets(&others, &oe, ambient);
            let g = &gens[i];
            let inside = oe.iter().all(|e| dot_int(e, g).is_zero()) && oi.iter().all(|a| !dot_int(a, g).is_negative());
            if inside && !others.is_empty() {
                gens.remove(i);
                ineqs = oi;
            } else {
                i += 1;
            }
        }
        Ok(Self { ambient, gens, ineqs, eqs })
    }

    pub fn from_i64(ambient: usize, generators: &[&[i64]]) -> Result<Self, FanError> {
        let g: Vec<Vec<Int>> = generators.iter().map(|g| g.iter().map(|&x| Int::from(x)).collect()).collect();
        Self::new(ambient, &g)
    }

    pub fn zero(ambient: usize) -> Self {
        Self::new(ambient, &[]).expect("zero cone")
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Minimal primitive generators (lineality directions appear with both signs).
    pub fn generators(&self) -> &[Vec<Int>] {
        &self.gens
    }

    /// Facet normals: the cone is `{x : a.x >= 0 for a in facets, e.x = 0 for e in equations}`.
    pub fn facets(&self) -> &[Vec<Int>] {
        &self.ineqs
    }

    pub fn equations(&self) -> &[Vec<Int>] {
        &self.eqs
    }

    pub fn dim(&self) -> usize {
        self.ambient - self.eqs.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.eqs.is_empty()
    }

    pub fn is_pointed(&self) -> bool {
        let mut rows = self.eqs.clone();
        rows.extend(self.ineqs.iter().cloned());
        IntMatrix::from_int_rows(&rows, self.ambient).rank() == self.ambient
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.eqs.iter().all(|e| dot_ir(e, x).is_zero()) && self.ineqs.iter().all(|a| !dot_ir(a, x).is_negative())
    }

    pub fn contains_int(&self, x: &[Int]) -> bool {
        self.eqs.iter().all(|e| dot_int(e, x).is_zero()) && self.ineqs.iter().all(|a| !dot_int(a, x).is_negative())
    }

    pub fn relint_contains(&self, x: &[Rat]) -> bool {
        self.eqs.iter().all(|e| dot_ir(e, x).is_zero()) && self.ineqs.iter().all(|a| dot_ir(a, x).is_positive())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.gens.iter().all(|g| self.contains_int(g))
    }

    pub fn dual(&self) -> Cone {
        let mut g = self.ineqs.clone();
        for e in &self.eqs {
            g.push(e.clone());
            g.push(e.iter().map(|x| -x).collect());
        }
        Cone::new(self.ambient, &g).expect("dual cone")
    }

    pub fn neg(&self) -> Cone {
        let g: Vec<Vec<Int>> = self.gens.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
        Cone::new(self.ambient, &g).expect("negated cone")
    }

    pub fn intersection(&self, other: &Cone) -> Cone {
        let mut g = self.dual().gens;
        g.extend(other.dual().gens);
        Cone::new(self.ambient, &g).expect("sum of duals").dual()
    }

    /// All faces, including the cone itself and its lineality space.
    pub fn faces(&self) -> Vec<Cone> {
        let mut seen: BTreeSet<Vec<Vec<Int>>> = BTreeSet::new();
        let mut out = Vec::new();
        let mut stack = vec![self.gens.clone()];
        seen.insert(self.gens.clone());
        while let Some(gs) = stack.pop() {
            let cone = Cone::new(self.ambient, &gs).expect("face");
            for a in &self.ineqs {
                let sub: Vec<Vec<Int>> = gs.iter().filter(|g| dot_int(a, g).is_zero()).cloned().collect();
                if seen.insert(sub.clone()) {
                    stack.push(sub);
                }
            }
            out.push(cone);
        }
        out.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.gens.cmp(&b.gens)));
        out
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        other.faces().iter().any(|f| f == self)
    }

    /// Basis of the lattice `cone^perp ∩ Z^n` in the dual lattice.
    pub fn perp_basis(&self) -> Vec<Vec<Int>> {
        self.eqs.clone()
    }

    /// Basis of the saturated lattice `span(cone) ∩ Z^n`.
    pub fn span_basis(&self) -> Vec<Vec<Int>> {
        if self.eqs.is_empty() {
            return IntMatrix::identity(self.ambient).to_rows();
        }
        kernel_basis(&IntMatrix::from_int_rows(&self.eqs, self.ambient))
    }

    /// Sum of the primitive generators; lies in the relative interior of a pointed cone.
    pub fn interior_vector(&self) -> Vec<Int> {
        let mut v = vec![Int::zero(); self.ambient];
        for g in &self.gens {
            for (a, b) in v.iter_mut().zip(g) {
                *a += b;
            }
        }
        v
    }
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.eqs == other.eqs && self.ineqs == other.ineqs
    }
}

impl Eq for Cone {}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self
            .gens
            .iter()
            .map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "Cone[{}]", g.join(" "))
    }
}

/// Facet normals of `cone(gens)` by Fourier-Motzkin elimination of the multipliers.
fn facets(gens: &[Vec<Int>], eqs: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    let k = gens.len();
    let width = n + k;
    let mut sys: Vec<(Vec<Int>, Kind)> = Vec::new();
    for i in 0..n {
        let mut row = vec![Int::zero(); width];
        row[i] = Int::from(1);
        for (j, g) in gens.iter().enumerate() {
            row[n + j] = -g[i].clone();
        }
        sys.push((row, Kind::Eq));
    }
    for j in 0..k {
        let mut row = vec![Int::zero(); width];
        row[n + j] = Int::from(1);
        sys.push((row, Kind::Ge));
    }
    for var in n..width {
        sys = eliminate(sys, var);
    }
    let dim = n - eqs.len();
    let mut out: BTreeSet<Vec<Int>> = BTreeSet::new();
    for (row, kind) in sys {
        if kind == Kind::Eq {
            continue;
        }
        let a = canonical_modulo(&row[..n], eqs, n);
        if a.iter().all(|x| x.is_zero()) {
            continue;
        }
        // keep only genuine facets
        let on: Vec<Vec<Int>> = gens.iter().filter(|g| dot_int(&a, g).is_zero()).cloned().collect();
        let r = if on.is_empty() { 0 } else { IntMatrix::from_int_rows(&on, n).rank() };
        if r + 1 == dim {
            out.insert(a);
        }
    }
    out.into_iter().collect()
}

fn eliminate(sys: Vec<(Vec<Int>, Kind)>, var: usize) -> Vec<(Vec<Int>, Kind)> {
    if let Some(p) = sys.iter().position(|(r, k)| *k == Kind::Eq && !r[var].is_zero()) {
        let mut e = sys[p].0.clone();
        if e[var].is_negative() {
            e = e.iter().map(|x| -x).collect();
        }
        let ev = e[var].clone();
        let mut out = Vec::new();
        for (i, (r, k)) in sys.into_iter().enumerate() {
            if i == p {
                continue;
            }
            let row = if r[var].is_zero() {
                r
            } else {
                r.iter().zip(&e).map(|(a, b)| a * &ev - &r[var] * b).collect()
            };
            push_row(&mut out, row, k);
        }
        return out;
    }
    let mut out = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (r, k) in sys {
        if r[var].is_zero() {
            push_row(&mut out, r, k);
        } else if r[var].is_positive() {
            pos.push(r);
        } else {
            neg.push(r);
        }
    }
    for p in &pos {
        for q in &neg {
            let a = p[var].clone();
            let b = -q[var].clone();
            let row: Vec<Int> = p.iter().zip(q).map(|(x, y)| x * &b + y * &a).collect();
            push_row(&mut out, row, Kind::Ge);
        }
    }
    out
}

fn push_row(out: &mut Vec<(Vec<Int>, Kind)>, row: Vec<Int>, kind: Kind) {
    if row.iter().all(|x| x.is_zero()) {
        return;
    }
    let mut row = primitive(&row);
    if kind == Kind::Eq {
        row = sign_normalize(&row);
    }
    if !out.iter().any(|(r, k)| *k == kind && *r == row) {
        out.push((row, kind));
    }
}

/// Projects `a` onto the span orthogonal to `eqs` and scales to a primitive integer vector.
fn canonical_modulo(a: &[Int], eqs: &[Vec<Int>], n: usize) -> Vec<Int> {
    if eqs.is_empty() {
        return primitive(a);
    }
    let e = IntMatrix::from_int_rows(eqs, n).to_q();
    let ar: Vec<Rat> = a.iter().map(|x| Rat::from_integer(x.clone())).collect();
    let gram = e.mul(&e.transpose());
    let rhs = e.apply(&ar);
    let c = gram.solve(&rhs).expect("gram matrix is invertible");
    let et = e.transpose();
    let corr = et.apply(&c);
    let proj: Vec<Rat> = ar.iter().zip(&corr).map(|(x, y)| x - y).collect();
    primitive_rat(&proj)
}
