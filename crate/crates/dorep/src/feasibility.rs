//! Exact rational linear feasibility with Farkas certificates.
//!
//! Systems have the shape `E v = 0`, `G v ≥ 1` over free rational
//! variables. The solver eliminates the equalities by exact Gaussian
//! reduction (tracking how every pivot row combines original rows),
//! projects the inequalities onto the free variables, and runs a
//! phase-one simplex on the Farkas dual of the projected system:
//!
//! * a zero phase-one optimum yields `y ≥ 0` with `Σ yᵢ Gᵢ` in the row
//!   space of `E` and `Σ yᵢ > 0`, an infeasibility certificate;
//! * a positive optimum yields simplex multipliers whose scaled
//!   negation satisfies every projected inequality, a feasible point.
//!
//! Everything is `BigRational`; there are no tolerances.

use crate::rat::Rat;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

/// Sorted-by-index sparse vector with nonzero coefficients.
pub type SparseRow = Vec<(usize, Rat)>;

/// `out += scale * row`, keeping the sparse invariants.
pub fn add_scaled(out: &SparseRow, row: &SparseRow, scale: &Rat) -> SparseRow {
    let mut merged: SparseRow = Vec::with_capacity(out.len() + row.len());
    let (mut i, mut j) = (0, 0);
    while i < out.len() || j < row.len() {
        let take_left = match (out.get(i), row.get(j)) {
            (Some((a, _)), Some((b, _))) => a <= b,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => unreachable!(),
        };
        if take_left {
            let (var, coeff) = &out[i];
            if j < row.len() && row[j].0 == *var {
                let combined = coeff + scale * &row[j].1;
                if !combined.is_zero() {
                    merged.push((*var, combined));
                }
                j += 1;
            } else {
                merged.push((*var, coeff.clone()));
            }
            i += 1;
        } else {
            let (var, coeff) = &row[j];
            let scaled = scale * coeff;
            if !scaled.is_zero() {
                merged.push((*var, scaled));
            }
            j += 1;
        }
    }
    merged
}

pub fn dot(row: &SparseRow, dense: &[Rat]) -> Rat {
    row.iter()
        .fold(Rat::zero(), |acc, (var, coeff)| acc + coeff * &dense[*var])
}

struct Pivot {
    var: usize,
    /// Unit coefficient on `var`, remaining support on free variables.
    row: SparseRow,
    /// This row as a combination of original equality rows.
    combo: SparseRow,
}

/// Reduced row echelon form built incrementally from equality rows.
struct Echelon {
    pivots: Vec<Pivot>,
    pivot_of_var: HashMap<usize, usize>,
}

impl Echelon {
    fn new() -> Echelon {
        Echelon {
            pivots: Vec::new(),
            pivot_of_var: HashMap::new(),
        }
    }

    /// Residual of `row` modulo the pivot rows, plus the multipliers
    /// used: `row = residual + Σ mult_k · pivot_k.row`.
    fn reduce(&self, row: &SparseRow) -> (SparseRow, Vec<(usize, Rat)>) {
        let mut residual = row.clone();
        let mut mults: Vec<(usize, Rat)> = Vec::new();
        loop {
            let hit = residual
                .iter()
                .find_map(|(var, coeff)| self.pivot_of_var.get(var).map(|k| (*k, coeff.clone())));
            match hit {
                Some((k, coeff)) => {
                    residual = add_scaled(&residual, &self.pivots[k].row, &-coeff.clone());
                    mults.push((k, coeff));
                }
                None => break,
            }
        }
        (residual, mults)
    }

    /// Fold an equality row in; returns false when it was redundant.
    fn add(&mut self, row: SparseRow, orig_index: usize) -> bool {
        let (residual, mults) = self.reduce(&row);
        if residual.is_empty() {
            return false;
        }
        // combo = (orig - Σ mult·combo_k) / leading
        let mut combo: SparseRow = vec![(orig_index, Rat::one())];
        for (k, mult) in &mults {
            combo = add_scaled(&combo, &self.pivots[*k].combo, &-mult.clone());
        }
        let (var, leading) = residual[0].clone();
        let inv = Rat::one() / leading;
        let row: SparseRow = residual
            .into_iter()
            .map(|(v, c)| (v, &c * &inv))
            .collect();
        let combo: SparseRow = combo.into_iter().map(|(v, c)| (v, &c * &inv)).collect();

        // Keep existing pivots clean of the new pivot variable.
        for k in 0..self.pivots.len() {
            if let Some(pos) = self.pivots[k].row.iter().position(|(v, _)| *v == var) {
                let coeff = self.pivots[k].row[pos].1.clone();
                self.pivots[k].row = add_scaled(&self.pivots[k].row, &row, &-coeff.clone());
                self.pivots[k].combo = add_scaled(&self.pivots[k].combo, &combo, &-coeff);
            }
        }
        self.pivot_of_var.insert(var, self.pivots.len());
        self.pivots.push(Pivot { var, row, combo });
        true
    }

    /// Original-row multipliers behind a list of pivot multipliers.
    fn expand_combo(&self, mults: &[(usize, Rat)]) -> SparseRow {
        let mut out: SparseRow = Vec::new();
        for (k, mult) in mults {
            out = add_scaled(&out, &self.pivots[*k].combo, mult);
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct FeasibilityProblem {
    pub num_vars: usize,
    /// Rows constrained to equal zero.
    pub equalities: Vec<SparseRow>,
    /// Rows constrained to be at least one.
    pub inequalities: Vec<SparseRow>,
}

/// Nonnegative multipliers over inequalities and signed multipliers
/// over equalities whose combination is the contradiction `0 ≥ s` with
/// `s > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub inequality_multipliers: Vec<(usize, Rat)>,
    pub equality_multipliers: Vec<(usize, Rat)>,
}

impl FarkasCertificate {
    /// Mechanical validity check: multipliers combine the rows to the
    /// zero vector while the inequality side carries positive weight.
    pub fn validate(&self, problem: &FeasibilityProblem) -> bool {
        let mut total: SparseRow = Vec::new();
        let mut weight = Rat::zero();
        for (i, y) in &self.inequality_multipliers {
            if y.is_negative() || *i >= problem.inequalities.len() {
                return false;
            }
            total = add_scaled(&total, &problem.inequalities[*i], y);
            weight += y;
        }
        for (j, lambda) in &self.equality_multipliers {
            if *j >= problem.equalities.len() {
                return false;
            }
            total = add_scaled(&total, &problem.equalities[*j], lambda);
        }
        total.is_empty() && weight.is_positive()
    }
}

#[derive(Debug, Clone)]
pub enum FeasibilityOutcome {
    Feasible(Vec<Rat>),
    Infeasible(FarkasCertificate),
}

/// Decide `E v = 0 ∧ G v ≥ 1` exactly.
pub fn solve(problem: &FeasibilityProblem) -> FeasibilityOutcome {
    let mut echelon = Echelon::new();
    for (idx, row) in problem.equalities.iter().enumerate() {
        echelon.add(row.clone(), idx);
    }

    // Project inequalities onto the free variables, deduplicating
    // identical residuals (they constrain the same functional).
    let mut residuals: Vec<SparseRow> = Vec::new();
    let mut representative: Vec<usize> = Vec::new();
    let mut seen: HashMap<SparseRow, usize> = HashMap::new();
    for (idx, row) in problem.inequalities.iter().enumerate() {
        let (residual, mults) = echelon.reduce(row);
        if residual.is_empty() {
            // 0 ≥ 1 outright: this inequality is refuted by the
            // equalities alone.
            let lambdas = echelon.expand_combo(&mults);
            return FeasibilityOutcome::Infeasible(FarkasCertificate {
                inequality_multipliers: vec![(idx, Rat::one())],
                equality_multipliers: negate(lambdas),
            });
        }
        if !seen.contains_key(&residual) {
            seen.insert(residual.clone(), residuals.len());
            residuals.push(residual);
            representative.push(idx);
        }
    }

    if residuals.is_empty() {
        // Only equalities: the echelon's zero point works.
        return FeasibilityOutcome::Feasible(vec![Rat::zero(); problem.num_vars]);
    }

    // Compact the free variables actually mentioned.
    let mut var_slot: HashMap<usize, usize> = HashMap::new();
    let mut slot_var: Vec<usize> = Vec::new();
    for row in &residuals {
        for (var, _) in row {
            if !var_slot.contains_key(var) {
                var_slot.insert(*var, slot_var.len());
                slot_var.push(*var);
            }
        }
    }
    let d = slot_var.len();
    let dense: Vec<Vec<Rat>> = residuals
        .iter()
        .map(|row| {
            let mut v = vec![Rat::zero(); d];
            for (var, coeff) in row {
                v[var_slot[var]] = coeff.clone();
            }
            v
        })
        .collect();

    match farkas_phase_one(&dense, d) {
        PhaseOneOutcome::PrimalPoint(t) => {
            // Free variables take t, pivot variables follow from their
            // (cleaned) rows: var = -Σ coeff·free.
            let mut v = vec![Rat::zero(); problem.num_vars];
            for (var, slot) in &var_slot {
                v[*var] = t[*slot].clone();
            }
            for pivot in &echelon.pivots {
                let mut value = Rat::zero();
                for (var, coeff) in &pivot.row {
                    if *var != pivot.var {
                        value -= coeff * &v[*var];
                    }
                }
                v[pivot.var] = value;
            }
            debug_assert!(problem
                .inequalities
                .iter()
                .all(|row| dot(row, &v) >= Rat::one()));
            debug_assert!(problem.equalities.iter().all(|row| dot(row, &v).is_zero()));
            FeasibilityOutcome::Feasible(v)
        }
        PhaseOneOutcome::DualRay(y) => {
            // Combine the original inequality rows, then cancel the
            // result against the equalities.
            let mut ineq_mults: Vec<(usize, Rat)> = Vec::new();
            let mut total: SparseRow = Vec::new();
            for (slot, weight) in y.iter().enumerate() {
                if weight.is_zero() {
                    continue;
                }
                let orig = representative[slot];
                ineq_mults.push((orig, weight.clone()));
                total = add_scaled(&total, &problem.inequalities[orig], weight);
            }
            let (residual, mults) = echelon.reduce(&total);
            debug_assert!(residual.is_empty());
            let cert = FarkasCertificate {
                inequality_multipliers: ineq_mults,
                equality_multipliers: negate(echelon.expand_combo(&mults)),
            };
            debug_assert!(cert.validate(problem));
            FeasibilityOutcome::Infeasible(cert)
        }
    }
}

fn negate(row: SparseRow) -> SparseRow {
    row.into_iter().map(|(i, c)| (i, -c)).collect()
}

enum PhaseOneOutcome {
    /// `t` with `row·t ≥ 1` for every row.
    PrimalPoint(Vec<Rat>),
    /// `y ≥ 0`, not all zero, with `Σ y_j row_j = 0`.
    DualRay(Vec<Rat>),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BasisCol {
    Real(usize),
    Artificial(usize),
}

/// Phase-one simplex for `max Σy : Σ y_j [row_j; 1] = e_last, y ≥ 0`,
/// run as a minimization of artificial weight with Bland's rule. The
/// optimum is zero exactly when a dual ray exists; otherwise the final
/// simplex multipliers scale into a primal point.
fn farkas_phase_one(rows: &[Vec<Rat>], d: usize) -> PhaseOneOutcome {
    let m = rows.len();
    let dim = d + 1;
    let column = |j: usize, i: usize| -> Rat {
        if i < d {
            rows[j][i].clone()
        } else {
            Rat::one()
        }
    };

    // basis_inverse rows × columns; basis starts all-artificial.
    let mut basis: Vec<BasisCol> = (0..dim).map(BasisCol::Artificial).collect();
    let mut inverse: Vec<Vec<Rat>> = (0..dim)
        .map(|i| {
            let mut row = vec![Rat::zero(); dim];
            row[i] = Rat::one();
            row
        })
        .collect();
    let mut values: Vec<Rat> = vec![Rat::zero(); dim];
    values[dim - 1] = Rat::one();

    loop {
        // Multipliers w = c_B · inverse, artificial cost 1, real cost 0.
        let mut w = vec![Rat::zero(); dim];
        for (k, col) in basis.iter().enumerate() {
            if matches!(col, BasisCol::Artificial(_)) {
                for i in 0..dim {
                    w[i] += &inverse[k][i];
                }
            }
        }

        // Bland entering: first real column priced above zero.
        let entering = (0..m).find(|&j| {
            let mut price = w[d].clone();
            for i in 0..d {
                if !rows[j][i].is_zero() {
                    price += &w[i] * &rows[j][i];
                }
            }
            price.is_positive()
        });

        let j = match entering {
            Some(j) => j,
            None => {
                let objective = values
                    .iter()
                    .zip(&basis)
                    .filter(|(_, col)| matches!(col, BasisCol::Artificial(_)))
                    .fold(Rat::zero(), |acc, (v, _)| acc + v);
                if objective.is_zero() {
                    // Basic solution is the dual ray.
                    let mut y = vec![Rat::zero(); m];
                    for (k, col) in basis.iter().enumerate() {
                        if let BasisCol::Real(r) = col {
                            y[*r] = values[k].clone();
                        }
                    }
                    debug_assert!(y.iter().any(|v| v.is_positive()));
                    return PhaseOneOutcome::DualRay(y);
                }
                // w·A_j ≤ 0 for every real column and w·b = objective > 0,
                // so -w/objective satisfies row·t ≥ 1 everywhere.
                let scale = -Rat::one() / objective;
                return PhaseOneOutcome::PrimalPoint(
                    (0..d).map(|i| &w[i] * &scale).collect(),
                );
            }
        };

        // Direction u = inverse · A_j.
        let u: Vec<Rat> = (0..dim)
            .map(|k| {
                (0..dim).fold(Rat::zero(), |acc, i| acc + &inverse[k][i] * column(j, i))
            })
            .collect();

        // Ratio test with Bland's tie-break on basis column identity.
        let mut leave: Option<(usize, Rat)> = None;
        for (k, uk) in u.iter().enumerate() {
            if uk.is_positive() {
                let ratio = &values[k] / uk;
                let better = match &leave {
                    None => true,
                    Some((cur, best)) => {
                        ratio < *best || (ratio == *best && bland_index(&basis[k], m) < bland_index(&basis[*cur], m))
                    }
                };
                if better {
                    leave = Some((k, ratio));
                }
            }
        }
        let (k, _) = leave.expect("phase-one objective is bounded below");

        // Pivot: scale row k, eliminate elsewhere.
        let pivot = u[k].clone();
        for cell in &mut inverse[k] {
            *cell = &*cell / &pivot;
        }
        values[k] = &values[k] / &pivot;
        let pivot_row = inverse[k].clone();
        for r in 0..dim {
            if r != k && !u[r].is_zero() {
                let factor = u[r].clone();
                for (cell, pk) in inverse[r].iter_mut().zip(&pivot_row) {
                    let delta = &factor * pk;
                    *cell = &*cell - &delta;
                }
                let delta = &factor * &values[k];
                values[r] = &values[r] - &delta;
            }
        }
        basis[k] = BasisCol::Real(j);
    }
}

fn bland_index(col: &BasisCol, m: usize) -> usize {
    match col {
        BasisCol::Real(j) => *j,
        BasisCol::Artificial(i) => m + i,
    }
}
