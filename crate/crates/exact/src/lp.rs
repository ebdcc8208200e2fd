//! Exact rational simplex.
//!
//! Two-phase dense tableau method with Bland's rule, so a given program is
//! always solved along the same pivot sequence. Every variable is free; sign
//! restrictions are ordinary constraints. Optimal outcomes carry dual
//! multipliers whose objective matches the primal optimum exactly, and
//! infeasible outcomes carry a Farkas certificate.

use num_traits::{One, Signed, Zero};

use crate::error::KernelError;
use crate::rat::{dot, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Relation,
    pub rhs: Rat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rat>,
    pub constraints: Vec<Constraint>,
    pub sense: Sense,
}

/// Result of [`solve_lp`].
///
/// `Optimal::duals` has one multiplier per constraint with
/// `Σ duals[i] · coeffs[i] = objective` and `Σ duals[i] · rhs[i] = value`.
/// For maximization the multipliers are `≥ 0` on `≤` rows and `≤ 0` on `≥`
/// rows; for minimization the signs flip.
///
/// `Infeasible::farkas` satisfies `Σ y[i] · coeffs[i] = 0`, `y[i] ≥ 0` on
/// `≥` rows, `y[i] ≤ 0` on `≤` rows and `Σ y[i] · rhs[i] > 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: Rat,
        point: Vec<Rat>,
        duals: Vec<Rat>,
    },
    Infeasible {
        farkas: Vec<Rat>,
    },
    Unbounded {
        point: Vec<Rat>,
        ray: Vec<Rat>,
    },
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }

    pub fn value(&self) -> Option<&Rat> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[Rat]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize, sense: Sense) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rat::zero(); num_vars],
            constraints: Vec::new(),
            sense,
        }
    }

    /// Feasibility program with a zero objective.
    pub fn feasibility(num_vars: usize) -> Self {
        Self::new(num_vars, Sense::Maximize)
    }

    pub fn with_objective(mut self, objective: Vec<Rat>) -> Self {
        self.objective = objective;
        self
    }

    pub fn push(&mut self, coeffs: Vec<Rat>, rel: Relation, rhs: Rat) {
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    pub fn add_le(&mut self, coeffs: Vec<Rat>, rhs: Rat) {
        self.push(coeffs, Relation::Le, rhs)
    }

    pub fn add_ge(&mut self, coeffs: Vec<Rat>, rhs: Rat) {
        self.push(coeffs, Relation::Ge, rhs)
    }

    pub fn add_eq(&mut self, coeffs: Vec<Rat>, rhs: Rat) {
        self.push(coeffs, Relation::Eq, rhs)
    }

    fn validate(&self) -> Result<(), KernelError> {
        if self.objective.len() != self.num_vars {
            return Err(KernelError::DimensionMismatch {
                expected: self.num_vars,
                got: self.objective.len(),
            });
        }
        for c in &self.constraints {
            if c.coeffs.len() != self.num_vars {
                return Err(KernelError::DimensionMismatch {
                    expected: self.num_vars,
                    got: c.coeffs.len(),
                });
            }
        }
        Ok(())
    }

    /// Whether `x` satisfies every constraint exactly.
    pub fn is_feasible_point(&self, x: &[Rat]) -> bool {
        x.len() == self.num_vars
            && self.constraints.iter().all(|c| {
                let lhs = dot(&c.coeffs, x);
                match c.rel {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                }
            })
    }

    /// Checks a Farkas certificate against this program.
    pub fn verify_farkas(&self, y: &[Rat]) -> bool {
        if y.len() != self.constraints.len() {
            return false;
        }
        for (yi, c) in y.iter().zip(&self.constraints) {
            let ok = match c.rel {
                Relation::Le => !yi.is_positive(),
                Relation::Ge => !yi.is_negative(),
                Relation::Eq => true,
            };
            if !ok {
                return false;
            }
        }
        let combo = self.combine(y);
        combo.iter().all(Zero::is_zero) && self.rhs_combo(y).is_positive()
    }

    /// Checks dual multipliers of an optimal outcome: dual feasibility and
    /// equality of primal and dual objective values.
    pub fn verify_duals(&self, value: &Rat, duals: &[Rat]) -> bool {
        if duals.len() != self.constraints.len() {
            return false;
        }
        let max = self.sense == Sense::Maximize;
        for (yi, c) in duals.iter().zip(&self.constraints) {
            let ok = match (c.rel, max) {
                (Relation::Eq, _) => true,
                (Relation::Le, true) | (Relation::Ge, false) => !yi.is_negative(),
                (Relation::Ge, true) | (Relation::Le, false) => !yi.is_positive(),
            };
            if !ok {
                return false;
            }
        }
        self.combine(duals) == self.objective && &self.rhs_combo(duals) == value
    }

    fn combine(&self, y: &[Rat]) -> Vec<Rat> {
        let mut acc = vec![Rat::zero(); self.num_vars];
        for (yi, c) in y.iter().zip(&self.constraints) {
            if yi.is_zero() {
                continue;
            }
            for (a, x) in acc.iter_mut().zip(&c.coeffs) {
                if !x.is_zero() {
                    *a += yi * x;
                }
            }
        }
        acc
    }

    fn rhs_combo(&self, y: &[Rat]) -> Rat {
        y.iter()
            .zip(&self.constraints)
            .fold(Rat::zero(), |s, (yi, c)| s + yi * &c.rhs)
    }
}

/// Solves `lp` exactly.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpOutcome, KernelError> {
    lp.validate()?;
    Ok(Tableau::build(lp).run(lp))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Col {
    Plus(usize),
    Minus(usize),
    Slack,
    Artificial,
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    cols: Vec<Col>,
    /// Column holding the initial identity entry of each row; its final
    /// content is the corresponding column of the inverse basis.
    id_col: Vec<usize>,
    sign: Vec<Rat>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.num_vars;
        let m = lp.constraints.len();
        let mut cols = Vec::new();
        for k in 0..n {
            cols.push(Col::Plus(k));
            cols.push(Col::Minus(k));
        }
        let mut slack_of = vec![None; m];
        for (i, c) in lp.constraints.iter().enumerate() {
            if c.rel != Relation::Eq {
                slack_of[i] = Some(cols.len());
                cols.push(Col::Slack);
            }
        }
        let mut sign = Vec::with_capacity(m);
        let mut id_col = vec![0; m];
        let mut needs_art = vec![false; m];
        for (i, c) in lp.constraints.iter().enumerate() {
            let s = if c.rhs.is_negative() { -Rat::one() } else { Rat::one() };
            let kappa = match c.rel {
                Relation::Le => 1,
                Relation::Ge => -1,
                Relation::Eq => 0,
            };
            let positive_slack = kappa != 0 && (kappa > 0) == s.is_positive();
            if positive_slack {
                id_col[i] = slack_of[i].unwrap();
            } else {
                needs_art[i] = true;
            }
            sign.push(s);
        }
        for i in 0..m {
            if needs_art[i] {
                id_col[i] = cols.len();
                cols.push(Col::Artificial);
            }
        }
        let ncols = cols.len();
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for (i, c) in lp.constraints.iter().enumerate() {
            let s = &sign[i];
            let mut row = vec![Rat::zero(); ncols];
            for (k, a) in c.coeffs.iter().enumerate() {
                if !a.is_zero() {
                    row[2 * k] = s * a;
                    row[2 * k + 1] = -(s * a);
                }
            }
            if let Some(j) = slack_of[i] {
                let kappa = if c.rel == Relation::Le { Rat::one() } else { -Rat::one() };
                row[j] = s * kappa;
            }
            if needs_art[i] {
                row[id_col[i]] = Rat::one();
            }
            rows.push(row);
            rhs.push(s * &c.rhs);
        }
        Tableau {
            rows,
            rhs,
            basis: id_col.clone(),
            cols,
            id_col,
            sign,
        }
    }

    fn pivot(&mut self, r: usize, c: usize, obj: &mut [Rat], obj_val: &mut Rat) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let nz: Vec<usize> = (0..self.cols.len())
            .filter(|&j| !self.rows[r][j].is_zero())
            .collect();
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for &j in &nz {
                let d = &f * &prow[j];
                self.rows[i][j] -= d;
            }
            if !prhs.is_zero() {
                self.rhs[i] -= &f * &prhs;
            }
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for &j in &nz {
                let d = &f * &prow[j];
                obj[j] -= d;
            }
            *obj_val -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Reduced costs `d_j = c_B B⁻¹ A_j − c_j` and value `c_B B⁻¹ b`.
    fn objective_row(&self, cost: &[Rat]) -> (Vec<Rat>, Rat) {
        let mut d: Vec<Rat> = cost.iter().map(|c| -c).collect();
        let mut v = Rat::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (dj, t) in d.iter_mut().zip(&self.rows[i]) {
                if !t.is_zero() {
                    *dj += cb * t;
                }
            }
            v += cb * &self.rhs[i];
        }
        (d, v)
    }

    /// Runs simplex iterations maximizing the objective described by `d`.
    /// Returns `Some(column)` if the program is unbounded along that column.
    fn iterate(&mut self, d: &mut [Rat], val: &mut Rat) -> Option<usize> {
        loop {
            let entering = (0..self.cols.len())
                .find(|&j| self.cols[j] != Col::Artificial && d[j].is_negative());
            let c = entering?;
            let mut best: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match best {
                None => return Some(c),
                Some((r, _)) => self.pivot(r, c, d, val),
            }
        }
    }

    fn primal_point(&self, n: usize) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            match self.cols[b] {
                Col::Plus(k) => x[k] += &self.rhs[i],
                Col::Minus(k) => x[k] -= &self.rhs[i],
                _ => {}
            }
        }
        x
    }

    /// `u_i = sign_i · (d_{id_col(i)} + cost_{id_col(i)})`.
    fn multipliers(&self, d: &[Rat], cost: &[Rat]) -> Vec<Rat> {
        self.id_col
            .iter()
            .zip(&self.sign)
            .map(|(&j, s)| s * (&d[j] + &cost[j]))
            .collect()
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let n = lp.num_vars;
        let ncols = self.cols.len();

        // phase 1: maximize −Σ artificials
        let cost1: Vec<Rat> = self
            .cols
            .iter()
            .map(|c| if *c == Col::Artificial { -Rat::one() } else { Rat::zero() })
            .collect();
        let (mut d, mut val) = self.objective_row(&cost1);
        let unbounded = self.iterate(&mut d, &mut val);
        debug_assert!(unbounded.is_none(), "phase 1 is bounded");
        if val.is_negative() {
            let u = self.multipliers(&d, &cost1);
            let farkas = u.into_iter().map(|x| -x).collect();
            return LpOutcome::Infeasible { farkas };
        }

        // drive zero-level artificials out of the basis where possible
        for r in 0..self.rows.len() {
            if self.cols[self.basis[r]] != Col::Artificial {
                continue;
            }
            if let Some(c) = (0..ncols)
                .find(|&j| self.cols[j] != Col::Artificial && !self.rows[r][j].is_zero())
            {
                let mut dummy = vec![Rat::zero(); ncols];
                let mut dv = Rat::zero();
                self.pivot(r, c, &mut dummy, &mut dv);
            }
        }

        // phase 2
        let sgn = if lp.sense == Sense::Maximize { Rat::one() } else { -Rat::one() };
        let cost2: Vec<Rat> = self
            .cols
            .iter()
            .map(|c| match *c {
                Col::Plus(k) => &sgn * &lp.objective[k],
                Col::Minus(k) => -(&sgn * &lp.objective[k]),
                _ => Rat::zero(),
            })
            .collect();
        let (mut d, mut val) = self.objective_row(&cost2);
        if let Some(c) = self.iterate(&mut d, &mut val) {
            let point = self.primal_point(n);
            let mut dir = vec![Rat::zero(); ncols];
            dir[c] = Rat::one();
            for (i, &b) in self.basis.iter().enumerate() {
                dir[b] = -self.rows[i][c].clone();
            }
            let mut ray = vec![Rat::zero(); n];
            for (j, col) in self.cols.iter().enumerate() {
                match *col {
                    Col::Plus(k) => ray[k] += &dir[j],
                    Col::Minus(k) => ray[k] -= &dir[j],
                    _ => {}
                }
            }
            return LpOutcome::Unbounded { point, ray };
        }
        let point = self.primal_point(n);
        let u = self.multipliers(&d, &cost2);
        let duals = u.into_iter().map(|x| &sgn * x).collect();
        let value = &sgn * val;
        LpOutcome::Optimal { value, point, duals }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, ints, rat};

    fn check(lp: &LinearProgram) -> LpOutcome {
        let out = solve_lp(lp).unwrap();
        match &out {
            LpOutcome::Optimal { value, point, duals } => {
                assert!(lp.is_feasible_point(point), "infeasible optimum");
                assert_eq!(&dot(&lp.objective, point), value);
                assert!(lp.verify_duals(value, duals), "bad duals {duals:?}");
            }
            LpOutcome::Infeasible { farkas } => {
                assert!(lp.verify_farkas(farkas), "bad farkas {farkas:?}")
            }
            LpOutcome::Unbounded { point, ray } => {
                assert!(lp.is_feasible_point(point));
                assert!(dot(&lp.objective, ray) != int(0));
            }
        }
        out
    }

    #[test]
    fn single_variable_bound() {
        let mut lp = LinearProgram::new(1, Sense::Maximize).with_objective(ints(&[1]));
        lp.add_ge(ints(&[1]), int(0));
        lp.add_le(ints(&[1]), int(3));
        assert_eq!(check(&lp).value(), Some(&int(3)));
    }

    #[test]
    fn contradictory_bounds() {
        let mut lp = LinearProgram::new(1, Sense::Maximize).with_objective(ints(&[1]));
        lp.add_ge(ints(&[1]), int(1));
        lp.add_le(ints(&[1]), int(0));
        assert!(matches!(check(&lp), LpOutcome::Infeasible { .. }));
    }

    #[test]
    fn minimize_with_equalities() {
        // min x + 2y s.t. x + y = 1, x - y <= 1/2, y >= 0
        let mut lp = LinearProgram::new(2, Sense::Minimize).with_objective(ints(&[1, 2]));
        lp.add_eq(ints(&[1, 1]), int(1));
        lp.add_le(ints(&[1, -1]), rat(1, 2));
        lp.add_ge(ints(&[0, 1]), int(0));
        let out = check(&lp);
        assert_eq!(out.value(), Some(&rat(5, 4)));
        assert_eq!(out.point().unwrap(), &[rat(3, 4), rat(1, 4)]);
    }

    #[test]
    fn unbounded_direction() {
        let mut lp = LinearProgram::new(2, Sense::Maximize).with_objective(ints(&[1, 1]));
        lp.add_ge(ints(&[1, 0]), int(0));
        lp.add_le(ints(&[0, 1]), int(1));
        assert!(matches!(check(&lp), LpOutcome::Unbounded { .. }));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2, Sense::Maximize).with_objective(ints(&[1, 0]));
        lp.add_eq(ints(&[1, 1]), int(2));
        lp.add_eq(ints(&[2, 2]), int(4));
        lp.add_ge(ints(&[0, 1]), int(0));
        assert_eq!(check(&lp).value(), Some(&int(2)));
    }

    #[test]
    fn infeasible_equalities() {
        let mut lp = LinearProgram::feasibility(2);
        lp.add_eq(ints(&[1, 1]), int(2));
        lp.add_eq(ints(&[1, 1]), int(3));
        assert!(matches!(check(&lp), LpOutcome::Infeasible { .. }));
    }

    #[test]
    fn malformed_dimensions() {
        let mut lp = LinearProgram::feasibility(2);
        lp.add_eq(ints(&[1]), int(2));
        assert!(solve_lp(&lp).is_err());
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example, cycles under the textbook largest-coefficient rule.
        let mut lp = LinearProgram::new(4, Sense::Maximize).with_objective(vec![
            rat(3, 4),
            int(-150),
            rat(1, 50),
            int(-6),
        ]);
        lp.add_le(vec![rat(1, 4), int(-60), rat(-1, 25), int(9)], int(0));
        lp.add_le(vec![rat(1, 2), int(-90), rat(-1, 50), int(3)], int(0));
        lp.add_le(ints(&[0, 0, 1, 0]), int(1));
        for k in 0..4 {
            lp.add_ge(crate::rat::unit(4, k), int(0));
        }
        assert_eq!(check(&lp).value(), Some(&rat(1, 20)));
    }
}
