//! Exact-rational linear programming for the region checks.
//!
//! Solves `min c.x  s.t.  A x <= b, x >= 0` by two-phase primal simplex with
//! Bland's rule, entirely over [`Rational`], so feasibility answers are exact
//! and never tolerance-dependent. Infeasible systems come back with Farkas
//! multipliers `y >= 0` satisfying `y.A >= 0` and `y.b < 0`, read off the
//! phase-1 dual.
//!
//! The dimensions in this crate are tiny (a handful of variables and rows),
//! so a dense tableau with full artificial basis keeps the code short and
//! the certificate extraction uniform.

use crate::rational::Rational;

/// One inequality `coeffs . x <= rhs`.
#[derive(Debug, Clone)]
pub(crate) struct Inequality {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

#[derive(Debug, Clone)]
pub(crate) enum Minimum {
    Optimal { value: Rational, point: Vec<Rational> },
    /// Farkas multipliers, one per input inequality.
    Infeasible(Vec<Rational>),
    Unbounded,
}

struct Tableau {
    num_vars: usize,
    num_rows: usize,
    /// Row-major body: num_rows x (num_vars + 2*num_rows) over columns
    /// [x | slack | artificial].
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    /// Sign applied to each input row to make the right-hand side
    /// nonnegative; needed to translate the phase-1 dual back to Farkas
    /// multipliers over the original inequalities.
    sign: Vec<bool>, // true = negated
    basis: Vec<usize>,
    obj: Vec<Rational>,
}

impl Tableau {
    fn new(num_vars: usize, constraints: &[Inequality]) -> Self {
        let m = constraints.len();
        let total = num_vars + 2 * m;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut sign = Vec::with_capacity(m);
        for (i, c) in constraints.iter().enumerate() {
            assert_eq!(c.coeffs.len(), num_vars, "coefficient arity mismatch");
            let negate = c.rhs.is_negative();
            let mut row = vec![Rational::zero(); total];
            for (j, a) in c.coeffs.iter().enumerate() {
                row[j] = if negate { -a } else { a.clone() };
            }
            row[num_vars + i] = if negate { -Rational::one() } else { Rational::one() };
            row[num_vars + m + i] = Rational::one();
            rows.push(row);
            rhs.push(if negate { -&c.rhs } else { c.rhs.clone() });
            sign.push(negate);
        }
        let basis = (0..m).map(|i| num_vars + m + i).collect();
        Tableau { num_vars, num_rows: m, rows, rhs, sign, basis, obj: Vec::new() }
    }

    fn total_cols(&self) -> usize {
        self.num_vars + 2 * self.num_rows
    }

    fn is_artificial(&self, col: usize) -> bool {
        col >= self.num_vars + self.num_rows
    }

    /// Reduced-cost row for the given raw costs, eliminated against the
    /// current basis.
    fn set_objective(&mut self, costs: &[Rational]) {
        let mut obj = costs.to_vec();
        for i in 0..self.num_rows {
            let f = obj[self.basis[i]].clone();
            if f.is_zero() {
                continue;
            }
            for (slot, cell) in obj.iter_mut().zip(&self.rows[i]) {
                let t = &f * cell;
                *slot = &*slot - &t;
            }
        }
        self.obj = obj;
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let inv = {
            let p = &self.rows[pr][pc];
            assert!(!p.is_zero(), "zero pivot");
            Rational::one() / p
        };
        for j in 0..self.total_cols() {
            self.rows[pr][j] = &self.rows[pr][j] * &inv;
        }
        self.rhs[pr] = &self.rhs[pr] * &inv;
        for i in 0..self.num_rows {
            if i == pr {
                continue;
            }
            let f = self.rows[i][pc].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..self.total_cols() {
                let t = &f * &self.rows[pr][j];
                self.rows[i][j] = &self.rows[i][j] - &t;
            }
            let t = &f * &self.rhs[pr];
            self.rhs[i] = &self.rhs[i] - &t;
        }
        let f = self.obj[pc].clone();
        if !f.is_zero() {
            for j in 0..self.total_cols() {
                let t = &f * &self.rows[pr][j];
                self.obj[j] = &self.obj[j] - &t;
            }
        }
        self.basis[pr] = pc;
    }

    /// Bland's rule: enter the lowest-index improving column, leave by the
    /// minimum ratio with the lowest basis index breaking ties. Returns
    /// false when no improving column remains (optimal), or errors when the
    /// chosen column is unbounded.
    fn bland_step(&mut self, allow_artificial: bool) -> Result<bool, ()> {
        let enter = (0..self.total_cols()).find(|&j| {
            (allow_artificial || !self.is_artificial(j)) && self.obj[j].is_negative()
        });
        let pc = match enter {
            Some(j) => j,
            None => return Ok(false),
        };
        let mut best: Option<(Rational, usize, usize)> = None; // (ratio, basis var, row)
        for i in 0..self.num_rows {
            if !self.rows[i][pc].is_positive() {
                continue;
            }
            let ratio = &self.rhs[i] / &self.rows[i][pc];
            let candidate = (ratio, self.basis[i], i);
            best = match best {
                None => Some(candidate),
                Some(cur) => {
                    if candidate.0 < cur.0 || (candidate.0 == cur.0 && candidate.1 < cur.1) {
                        Some(candidate)
                    } else {
                        Some(cur)
                    }
                }
            };
        }
        match best {
            Some((_, _, pr)) => {
                self.pivot(pr, pc);
                Ok(true)
            }
            None => Err(()), // column unbounded
        }
    }

    /// Minimizes the sum of artificial variables. Returns the optimum.
    fn phase_one(&mut self) -> Rational {
        let mut costs = vec![Rational::zero(); self.total_cols()];
        for cost in costs.iter_mut().skip(self.num_vars + self.num_rows) {
            *cost = Rational::one();
        }
        self.set_objective(&costs);
        while self.bland_step(true).expect("phase 1 objective is bounded below by zero") {}
        let mut value = Rational::zero();
        for i in 0..self.num_rows {
            if self.is_artificial(self.basis[i]) {
                value = &value + &self.rhs[i];
            }
        }
        value
    }

    /// Farkas multipliers over the original inequalities, from the phase-1
    /// dual: u_i = 1 - reduced_cost(artificial_i), negated back through the
    /// row signs.
    fn farkas(&self) -> Vec<Rational> {
        (0..self.num_rows)
            .map(|i| {
                let rc = &self.obj[self.num_vars + self.num_rows + i];
                let u = Rational::one() - rc;
                if self.sign[i] {
                    u
                } else {
                    -u
                }
            })
            .collect()
    }

    /// Drives basic artificials out of the basis (or leaves them pinned on
    /// all-zero rows, where they are inert).
    fn expel_artificials(&mut self) {
        for i in 0..self.num_rows {
            if !self.is_artificial(self.basis[i]) {
                continue;
            }
            debug_assert!(self.rhs[i].is_zero(), "basic artificial at nonzero level");
            let pc = (0..self.num_vars + self.num_rows).find(|&j| !self.rows[i][j].is_zero());
            if let Some(pc) = pc {
                self.pivot(i, pc);
            }
        }
    }

    fn solution(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.num_vars];
        for i in 0..self.num_rows {
            if self.basis[i] < self.num_vars {
                x[self.basis[i]] = self.rhs[i].clone();
            }
        }
        x
    }
}

/// Minimizes `objective . x` over `{x >= 0 : A x <= b}`.
pub(crate) fn minimize(
    num_vars: usize,
    objective: &[Rational],
    constraints: &[Inequality],
) -> Minimum {
    assert_eq!(objective.len(), num_vars);
    let mut t = Tableau::new(num_vars, constraints);
    if !t.phase_one().is_zero() {
        return Minimum::Infeasible(t.farkas());
    }
    t.expel_artificials();
    let mut costs = vec![Rational::zero(); t.total_cols()];
    costs[..num_vars].clone_from_slice(objective);
    t.set_objective(&costs);
    loop {
        match t.bland_step(false) {
            Ok(true) => {}
            Ok(false) => break,
            Err(()) => return Minimum::Unbounded,
        }
    }
    let point = t.solution();
    let value = objective
        .iter()
        .zip(&point)
        .map(|(c, x)| c * x)
        .sum();
    Minimum::Optimal { value, point }
}

/// Checks a Farkas certificate: multipliers nonnegative, combined
/// coefficients nonnegative, combined right-hand side negative. With
/// `x >= 0` this is a proof of infeasibility.
pub(crate) fn farkas_is_valid(
    num_vars: usize,
    constraints: &[Inequality],
    multipliers: &[Rational],
) -> bool {
    if multipliers.len() != constraints.len() {
        return false;
    }
    if multipliers.iter().any(|y| y.is_negative()) {
        return false;
    }
    let mut combined = vec![Rational::zero(); num_vars];
    let mut rhs = Rational::zero();
    for (y, c) in multipliers.iter().zip(constraints) {
        for (acc, a) in combined.iter_mut().zip(&c.coeffs) {
            *acc = &*acc + &(y * a);
        }
        rhs = &rhs + &(y * &c.rhs);
    }
    combined.iter().all(|v| !v.is_negative()) && rhs.is_negative()
}
