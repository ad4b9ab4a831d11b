//! Exact feasibility of conjunctions of rational linear constraints.
//!
//! Strict rows `e > 0` are decided by maximizing a shared slack `t` subject
//! to `e >= t` for every strict row, `t <= 1` and the non-strict rows; the
//! system is feasible iff the optimum is positive. The LP is solved by a
//! dictionary simplex over `BigRational` with Bland's rule, so it always
//! terminates and never rounds.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{format_rational, Rational};

/// `sum_k coeffs[k] * x_k + constant`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinExpr {
    coeffs: BTreeMap<usize, Rational>,
    constant: Rational,
}

impl LinExpr {
    pub fn zero() -> Self {
        LinExpr::default()
    }

    pub fn var(k: usize) -> Self {
        let mut e = LinExpr::zero();
        e.add_term(k, Rational::one());
        e
    }

    pub fn constant(c: Rational) -> Self {
        LinExpr {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    /// Builds `a · x` from a dense integer vector.
    pub fn from_dense(a: &[i64]) -> Self {
        let mut e = LinExpr::zero();
        for (k, &c) in a.iter().enumerate() {
            e.add_term(k, Rational::from_integer(BigInt::from(c)));
        }
        e
    }

    pub fn add_term(&mut self, k: usize, c: Rational) {
        let entry = self.coeffs.entry(k).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// One past the largest variable index used.
    pub fn var_bound(&self) -> usize {
        self.coeffs.keys().next_back().map_or(0, |k| k + 1)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut v = self.constant.clone();
        for (&k, c) in &self.coeffs {
            v += c * point.get(k).cloned().unwrap_or_else(Rational::zero);
        }
        v
    }

    pub fn neg(&self) -> LinExpr {
        LinExpr {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c)).collect(),
            constant: -&self.constant,
        }
    }

    pub fn sub(&self, other: &LinExpr) -> LinExpr {
        let mut e = self.clone();
        for (&k, c) in &other.coeffs {
            e.add_term(k, -c);
        }
        e.constant -= &other.constant;
        e
    }

    pub fn scale(&self, s: &Rational) -> LinExpr {
        if s.is_zero() {
            return LinExpr::zero();
        }
        LinExpr {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, c * s)).collect(),
            constant: &self.constant * s,
        }
    }

    /// Renders with variable names supplied by `name`.
    pub fn display_with(&self, name: &dyn Fn(usize) -> String) -> String {
        let mut s = String::new();
        for (&k, c) in &self.coeffs {
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if s.is_empty() {
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            if !mag.is_one() {
                s.push_str(&format_rational(&mag));
                s.push('*');
            }
            s.push_str(&name(k));
        }
        if !self.constant.is_zero() || s.is_empty() {
            if s.is_empty() {
                s = format_rational(&self.constant);
            } else {
                let sign = if self.constant.is_negative() { "-" } else { "+" };
                s.push_str(&format!(" {sign} {}", format_rational(&self.constant.abs())));
            }
        }
        s
    }
}

impl fmt::Debug for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&|k| format!("x{k}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// `expr > 0`
    Gt,
    /// `expr >= 0`
    Ge,
    /// `expr = 0`
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Gt => ">",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

/// `expr rel 0`, scaled to coprime integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    expr: LinExpr,
    rel: Relation,
}

impl Constraint {
    pub fn new(expr: LinExpr, rel: Relation) -> Constraint {
        let mut c = Constraint { expr, rel };
        c.normalize();
        c
    }

    pub fn gt(expr: LinExpr) -> Constraint {
        Constraint::new(expr, Relation::Gt)
    }

    pub fn ge(expr: LinExpr) -> Constraint {
        Constraint::new(expr, Relation::Ge)
    }

    pub fn eq(expr: LinExpr) -> Constraint {
        Constraint::new(expr, Relation::Eq)
    }

    /// `lhs > rhs`.
    pub fn greater(lhs: &LinExpr, rhs: &LinExpr) -> Constraint {
        Constraint::gt(lhs.sub(rhs))
    }

    fn normalize(&mut self) {
        let values = || self.expr.coeffs.values().chain(std::iter::once(&self.expr.constant));
        let lcm = values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let gcd = values().fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * (&lcm / c.denom()))));
        if gcd.is_zero() {
            return;
        }
        let scale = Rational::new(lcm, gcd);
        if !scale.is_one() {
            self.expr = self.expr.scale(&scale);
        }
    }

    pub fn expr(&self) -> &LinExpr {
        &self.expr
    }

    pub fn relation(&self) -> Relation {
        self.rel
    }

    pub fn is_strict(&self) -> bool {
        self.rel == Relation::Gt
    }

    pub fn satisfied_by(&self, point: &[Rational]) -> bool {
        let v = self.expr.eval(point);
        match self.rel {
            Relation::Gt => v.is_positive(),
            Relation::Ge => !v.is_negative(),
            Relation::Eq => v.is_zero(),
        }
    }

    /// The complement: `not (e > 0)` is `-e >= 0` and `not (e >= 0)` is
    /// `-e > 0`. Equalities have no single-row complement.
    pub fn negate(&self) -> Option<Constraint> {
        let rel = match self.rel {
            Relation::Gt => Relation::Ge,
            Relation::Ge => Relation::Gt,
            Relation::Eq => return None,
        };
        Some(Constraint::new(self.expr.neg(), rel))
    }

    /// Integer coefficients as `(variable, coefficient)` pairs plus the
    /// constant term.
    pub fn integer_form(&self) -> (Vec<(usize, BigInt)>, BigInt) {
        let terms = self
            .expr
            .terms()
            .map(|(k, c)| (k, c.to_integer()))
            .collect();
        (terms, self.expr.constant.to_integer())
    }

    pub fn display_with(&self, name: &dyn Fn(usize) -> String) -> String {
        format!("{} {} 0", self.expr.display_with(name), self.rel.symbol())
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {} 0", self.expr, self.rel.symbol())
    }
}

/// A point satisfying every constraint of the system it was produced for.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Witness {
    point: Vec<Rational>,
}

impl Witness {
    /// Checks `point` against `system` by exact substitution.
    pub fn verified(point: Vec<Rational>, system: &[Constraint]) -> Option<Witness> {
        system
            .iter()
            .all(|c| c.satisfied_by(&point))
            .then_some(Witness { point })
    }

    pub fn point(&self) -> &[Rational] {
        &self.point
    }

    pub fn into_point(self) -> Vec<Rational> {
        self.point
    }
}

/// Decides the conjunction `system` over variables `0..nvars` and returns a
/// satisfying point if one exists. Deterministic for a fixed input order.
pub fn feasible(system: &[Constraint], nvars: usize) -> Option<Witness> {
    let nvars = system
        .iter()
        .map(|c| c.expr.var_bound())
        .fold(nvars, usize::max);
    let point = solve(system, nvars)?;
    let w = Witness::verified(point, system);
    assert!(w.is_some(), "simplex produced a point violating its system");
    w
}

/// A dense affine row `sum coeffs[k] * v_k + constant` over the solver's
/// column space.
#[derive(Clone)]
struct Row {
    basic: usize,
    constant: Rational,
    coeffs: Vec<Rational>,
    /// Basic variable is free: no sign requirement, never leaves.
    free: bool,
}

struct Dictionary {
    rows: Vec<Row>,
    /// Variable id of each nonbasic column.
    nonbasic: Vec<usize>,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Dictionary {
    /// Makes nonbasic column `col` basic in row `r`.
    fn pivot(&mut self, r: usize, col: usize, objective: Option<&mut Row>) {
        let entering = self.nonbasic[col];
        let leaving = self.rows[r].basic;
        let piv = self.rows[r].coeffs[col].clone();
        debug_assert!(!piv.is_zero());
        let inv = piv.recip();
        {
            let row = &mut self.rows[r];
            row.constant = -&row.constant * &inv;
            for (k, c) in row.coeffs.iter_mut().enumerate() {
                if k == col {
                    *c = inv.clone();
                } else if !c.is_zero() {
                    *c = -&*c * &inv;
                }
            }
            row.basic = entering;
        }
        self.nonbasic[col] = leaving;
        let pr = self.rows[r].clone();
        let substitute = |target: &mut Row| {
            let f = std::mem::replace(&mut target.coeffs[col], Rational::zero());
            if f.is_zero() {
                return;
            }
            target.constant += &f * &pr.constant;
            for (k, c) in pr.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    target.coeffs[k] += &f * c;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                substitute(row);
            }
        }
        if let Some(obj) = objective {
            substitute(obj);
        }
    }

    /// Maximizes `objective` (an affine expression in the nonbasic columns)
    /// with Bland's rule. `allowed` filters which columns may enter.
    fn maximize(&mut self, objective: &mut Row, allowed: &dyn Fn(usize) -> bool) -> Outcome {
        loop {
            let entering = (0..self.nonbasic.len())
                .filter(|&c| allowed(self.nonbasic[c]) && objective.coeffs[c].is_positive())
                .min_by_key(|&c| self.nonbasic[c]);
            let Some(col) = entering else {
                return Outcome::Optimal;
            };
            let mut best: Option<(Rational, usize, usize)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if row.free || !row.coeffs[col].is_negative() {
                    continue;
                }
                let ratio = &row.constant / -&row.coeffs[col];
                let better = match &best {
                    None => true,
                    Some((b, _, basic)) => ratio < *b || (ratio == *b && row.basic < *basic),
                };
                if better {
                    best = Some((ratio, r, row.basic));
                }
            }
            let Some((_, r, _)) = best else {
                return Outcome::Unbounded;
            };
            self.pivot(r, col, Some(objective));
        }
    }
}

fn solve(system: &[Constraint], nx: usize) -> Option<Vec<Rational>> {
    let has_strict = system.iter().any(Constraint::is_strict);
    // Column ids: x_0..x_{nx-1}, then t when strict rows exist.
    let t_var = nx;
    let ncols = nx + usize::from(has_strict);

    let dense = |e: &LinExpr| -> (Vec<Rational>, Rational) {
        let mut v = vec![Rational::zero(); ncols];
        for (k, c) in e.terms() {
            v[k] = c.clone();
        }
        (v, e.constant_term().clone())
    };

    let mut equalities = Vec::new();
    let mut inequalities = Vec::new();
    for c in system {
        let (mut a, b) = dense(&c.expr);
        match c.rel {
            Relation::Eq => equalities.push((a, b)),
            Relation::Ge => inequalities.push((a, b)),
            Relation::Gt => {
                a[t_var] = -Rational::one();
                inequalities.push((a, b));
            }
        }
    }
    if has_strict {
        let mut a = vec![Rational::zero(); ncols];
        a[t_var] = -Rational::one();
        inequalities.push((a, Rational::one()));
    }

    // Gaussian elimination of the equalities; x_p = expr in later columns.
    let mut substitutions: Vec<(usize, Vec<Rational>, Rational)> = Vec::new();
    let mut eliminated = vec![false; ncols];
    for idx in 0..equalities.len() {
        let (a, b) = equalities[idx].clone();
        let Some(p) = (0..ncols).find(|&k| !a[k].is_zero()) else {
            if b.is_zero() {
                continue;
            }
            return None;
        };
        let inv = -a[p].recip();
        let sub_a: Vec<Rational> = a
            .iter()
            .enumerate()
            .map(|(k, c)| if k == p { Rational::zero() } else { c * &inv })
            .collect();
        let sub_b = &b * &inv;
        let apply = |row: &mut (Vec<Rational>, Rational)| {
            let f = std::mem::replace(&mut row.0[p], Rational::zero());
            if f.is_zero() {
                return;
            }
            row.1 += &f * &sub_b;
            for (k, c) in sub_a.iter().enumerate() {
                if !c.is_zero() {
                    row.0[k] += &f * c;
                }
            }
        };
        for row in equalities.iter_mut().skip(idx + 1) {
            apply(row);
        }
        for row in inequalities.iter_mut() {
            apply(row);
        }
        for (_, sa, sb) in substitutions.iter_mut() {
            let mut tmp = (std::mem::take(sa), sb.clone());
            apply(&mut tmp);
            *sa = tmp.0;
            *sb = tmp.1;
        }
        eliminated[p] = true;
        substitutions.push((p, sub_a, sub_b));
    }

    // Dictionary with slacks basic: s_r = b_r + a_r · v.
    let slack0 = ncols;
    let mut dict = Dictionary {
        rows: inequalities
            .into_iter()
            .enumerate()
            .map(|(r, (a, b))| Row {
                basic: slack0 + r,
                constant: b,
                coeffs: a,
                free: false,
            })
            .collect(),
        nonbasic: (0..ncols).collect(),
    };

    // Free columns enter the basis once and stay there.
    for col in 0..ncols {
        if eliminated[col] {
            continue;
        }
        if let Some(r) = dict
            .rows
            .iter()
            .position(|row| !row.free && !row.coeffs[col].is_zero())
        {
            dict.pivot(r, col, None);
            dict.rows[r].free = true;
        }
    }
    let free_id = |v: usize| v < ncols;

    // Phase 1 with a single artificial column.
    let min_row = dict
        .rows
        .iter()
        .enumerate()
        .filter(|(_, row)| !row.free && row.constant.is_negative())
        .min_by(|a, b| a.1.constant.cmp(&b.1.constant).then(a.1.basic.cmp(&b.1.basic)))
        .map(|(r, _)| r);
    if let Some(r) = min_row {
        let art = slack0 + dict.rows.len();
        for row in dict.rows.iter_mut() {
            row.coeffs.push(if row.free { Rational::zero() } else { Rational::one() });
        }
        dict.nonbasic.push(art);
        let col = dict.nonbasic.len() - 1;
        let mut obj = Row {
            basic: usize::MAX,
            constant: Rational::zero(),
            coeffs: vec![Rational::zero(); dict.nonbasic.len()],
            free: true,
        };
        obj.coeffs[col] = -Rational::one();
        dict.pivot(r, col, Some(&mut obj));
        dict.maximize(&mut obj, &|v| !free_id(v));
        if obj.constant.is_negative() {
            return None;
        }
        // Drive the artificial variable out of the basis if needed.
        if let Some(r) = dict.rows.iter().position(|row| row.basic == art) {
            let col = (0..dict.nonbasic.len())
                .filter(|&c| !dict.rows[r].coeffs[c].is_zero())
                .min_by_key(|&c| dict.nonbasic[c]);
            match col {
                Some(c) => dict.pivot(r, c, None),
                None => {
                    dict.rows.remove(r);
                }
            }
        }
        let col = dict
            .nonbasic
            .iter()
            .position(|&v| v == art)
            .expect("artificial is nonbasic");
        dict.nonbasic.remove(col);
        for row in dict.rows.iter_mut() {
            row.coeffs.remove(col);
        }
    }

    if has_strict {
        let mut obj = match dict.rows.iter().find(|row| row.basic == t_var) {
            Some(row) => row.clone(),
            None => {
                // t never entered: impossible, the t <= 1 row contains it.
                unreachable!("slack variable missing from dictionary")
            }
        };
        obj.free = true;
        if let Outcome::Unbounded = dict.maximize(&mut obj, &|v| !free_id(v)) {
            unreachable!("t is bounded above by 1");
        }
        if !obj.constant.is_positive() {
            return None;
        }
    }

    let mut values = vec![Rational::zero(); ncols];
    for row in &dict.rows {
        if row.basic < ncols {
            values[row.basic] = row.constant.clone();
        }
    }
    for (p, a, b) in substitutions.iter().rev() {
        let mut v = b.clone();
        for (k, c) in a.iter().enumerate() {
            if !c.is_zero() {
                v += c * &values[k];
            }
        }
        values[*p] = v;
    }
    values.truncate(nx);
    Some(values)
}

/// Row echelon data from fraction-free (Bareiss) elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    /// Pivot column of each independent row, increasing.
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Bareiss elimination over the integers; every intermediate division is
/// exact.
pub fn echelon(rows: &[Vec<BigInt>]) -> Echelon {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let ncols = m.iter().map(Vec::len).max().unwrap_or(0);
    for row in m.iter_mut() {
        row.resize(ncols, BigInt::zero());
    }
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            for k in col + 1..ncols {
                let v = (&m[r][col] * &m[i][k] - &m[i][col] * &m[r][k]) / &prev;
                m[i][k] = v;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[r][col].clone();
        pivots.push(col);
        r += 1;
    }
    Echelon { pivots }
}

/// Scales a rational vector to a primitive integer vector.
pub fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    v.iter().map(|c| c.numer() * (&lcm / c.denom())).collect()
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let ints: Vec<Vec<BigInt>> = rows.iter().map(|r| clear_denominators(r)).collect();
    echelon(&ints).rank()
}

/// Dimension of the affine hull of `points`; -1 for the empty set.
pub fn affine_dimension(points: &[Vec<Rational>]) -> isize {
    match points.split_first() {
        None => -1,
        Some((p0, rest)) => {
            let diffs: Vec<Vec<Rational>> = rest
                .iter()
                .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
                .collect();
            rank(&diffs) as isize
        }
    }
}

/// Reduced row echelon form over the rationals: `(rows, pivot columns)`.
pub fn rref(rows: &[Vec<Rational>], ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.resize(ncols, Rational::zero());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for c in m[r].iter_mut() {
            *c *= &inv;
        }
        let pr = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (k, c) in pr.iter().enumerate() {
                if !c.is_zero() {
                    row[k] -= &f * c;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// A basis of `{x in Q^ncols : row · x = 0 for every row}`.
pub fn null_space(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let (m, pivots) = rref(rows, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = -&row[free];
        }
        basis.push(v);
    }
    basis
}
