//! Dense tableau simplex with Bland's anti-cycling rule.
//!
//! Sized for the small linear programs of L1 and L∞ fitting (tens of rows).
//! Rows whose right-hand side is nonnegative and that own a unit column start
//! basic; the auxiliary phase runs only when some row needs an artificial.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RowKind {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LpError {
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<f64>,
    kind: RowKind,
    rhs: f64,
}

/// `min cᵀx` subject to linear rows; variables flagged free are unrestricted, the rest `≥ 0`.
#[derive(Debug, Clone)]
pub(crate) struct LinearProgram {
    cost: Vec<f64>,
    free: Vec<bool>,
    rows: Vec<Row>,
}

const COST_EPS: f64 = 1e-11;
const PIVOT_EPS: f64 = 1e-11;
const FEASIBILITY_EPS: f64 = 1e-9;
const MAX_PIVOTS: usize = 100_000;

impl LinearProgram {
    pub(crate) fn new(cost: Vec<f64>, free: Vec<bool>) -> Self {
        assert_eq!(cost.len(), free.len());
        Self {
            cost,
            free,
            rows: Vec::new(),
        }
    }

    pub(crate) fn add_row(&mut self, coeffs: Vec<f64>, kind: RowKind, rhs: f64) {
        assert_eq!(coeffs.len(), self.cost.len());
        self.rows.push(Row { coeffs, kind, rhs });
    }

    pub(crate) fn solve(&self) -> Result<Vec<f64>, LpError> {
        // column map: each free variable becomes x⁺ − x⁻
        let mut split: Vec<(usize, f64)> = Vec::new();
        for (j, &free) in self.free.iter().enumerate() {
            split.push((j, 1.0));
            if free {
                split.push((j, -1.0));
            }
        }
        let n_struct = split.len();
        let m = self.rows.len();

        // normalize to rhs >= 0
        let mut rows: Vec<(Vec<f64>, RowKind, f64)> = self
            .rows
            .iter()
            .map(|r| {
                let coeffs: Vec<f64> = split.iter().map(|&(j, s)| s * r.coeffs[j]).collect();
                if r.rhs < 0.0 {
                    let kind = match r.kind {
                        RowKind::Le => RowKind::Ge,
                        RowKind::Ge => RowKind::Le,
                        RowKind::Eq => RowKind::Eq,
                    };
                    (coeffs.iter().map(|c| -c).collect(), kind, -r.rhs)
                } else {
                    (coeffs, r.kind, r.rhs)
                }
            })
            .collect();

        // slack / surplus columns
        let n_slack = rows.iter().filter(|r| r.1 != RowKind::Eq).count();
        let mut basis: Vec<Option<usize>> = vec![None; m];
        let mut slack_cols: Vec<Option<(usize, f64)>> = vec![None; m];
        let mut next = n_struct;
        for (i, row) in rows.iter().enumerate() {
            match row.1 {
                RowKind::Le => {
                    slack_cols[i] = Some((next, 1.0));
                    basis[i] = Some(next);
                    next += 1;
                }
                RowKind::Ge => {
                    slack_cols[i] = Some((next, -1.0));
                    next += 1;
                }
                RowKind::Eq => {}
            }
        }
        debug_assert_eq!(next, n_struct + n_slack);

        // equality rows: reuse a structural unit column when one exists
        for i in 0..m {
            if rows[i].1 != RowKind::Eq {
                continue;
            }
            let unit = (0..n_struct).find(|&j| {
                rows[i].0[j] > 0.0
                    && !basis.contains(&Some(j))
                    && (0..m).all(|r| r == i || rows[r].0[j] == 0.0)
            });
            if let Some(j) = unit {
                let piv = rows[i].0[j];
                if piv != 1.0 {
                    for c in rows[i].0.iter_mut() {
                        *c /= piv;
                    }
                    rows[i].2 /= piv;
                }
                basis[i] = Some(j);
            }
        }

        let n_art = basis.iter().filter(|b| b.is_none()).count();
        let cols = n_struct + n_slack + n_art;
        let width = cols + 1;
        let mut t = Tableau {
            m,
            cols,
            width,
            a: vec![0.0; m * width],
            obj: vec![0.0; width],
            basis: vec![0; m],
        };
        let mut art = n_struct + n_slack;
        for (i, row) in rows.iter().enumerate() {
            let base = i * width;
            t.a[base..base + n_struct].copy_from_slice(&row.0);
            if let Some((c, s)) = slack_cols[i] {
                t.a[base + c] = s;
            }
            t.a[base + cols] = row.2;
            t.basis[i] = match basis[i] {
                Some(b) => b,
                None => {
                    t.a[base + art] = 1.0;
                    art += 1;
                    art - 1
                }
            };
        }
        let first_art = n_struct + n_slack;

        if n_art > 0 {
            // auxiliary phase: minimize the sum of artificials
            let mut cost = vec![0.0; cols];
            for c in cost.iter_mut().skip(first_art) {
                *c = 1.0;
            }
            t.set_objective(&cost);
            t.run(cols)?;
            if -t.obj[cols] > FEASIBILITY_EPS * (1.0 + t.rhs_scale()) {
                return Err(LpError::Infeasible);
            }
            t.drive_out_artificials(first_art);
        }

        let mut cost = vec![0.0; cols];
        for (c, &(j, s)) in split.iter().enumerate() {
            cost[c] = s * self.cost[j];
        }
        t.set_objective(&cost);
        t.run(first_art)?;

        let mut x_split = vec![0.0; cols];
        for i in 0..m {
            x_split[t.basis[i]] = t.a[i * width + cols];
        }
        let mut x = vec![0.0; self.cost.len()];
        for (c, &(j, s)) in split.iter().enumerate() {
            x[j] += s * x_split[c];
        }
        Ok(x)
    }
}

struct Tableau {
    m: usize,
    cols: usize,
    width: usize,
    a: Vec<f64>,
    /// Reduced costs; `obj[cols]` holds `−z`.
    obj: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn set_objective(&mut self, cost: &[f64]) {
        self.obj[..self.cols].copy_from_slice(cost);
        self.obj[self.cols] = 0.0;
        for i in 0..self.m {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.a[i * self.width..(i + 1) * self.width];
                for (o, r) in self.obj.iter_mut().zip(row) {
                    *o -= cb * r;
                }
            }
        }
    }

    fn rhs_scale(&self) -> f64 {
        (0..self.m).fold(0.0_f64, |s, i| s.max(self.a[i * self.width + self.cols].abs()))
    }

    /// Pivots until optimal; columns `>= limit` never enter.
    fn run(&mut self, limit: usize) -> Result<(), LpError> {
        for _ in 0..MAX_PIVOTS {
            // Bland: lowest-index improving column
            let Some(enter) = (0..limit).find(|&j| self.obj[j] < -COST_EPS) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let aij = self.a[i * self.width + enter];
                if aij <= PIVOT_EPS {
                    continue;
                }
                let ratio = self.a[i * self.width + self.cols] / aij;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((r, best)) => {
                        let tol = 1e-12 * (1.0 + best.abs());
                        if ratio < best - tol
                            || (ratio <= best + tol && self.basis[i] < self.basis[r])
                        {
                            Some((i, ratio))
                        } else {
                            Some((r, best))
                        }
                    }
                };
            }
            let Some((row, _)) = leave else {
                return Err(LpError::Unbounded);
            };
            self.pivot(row, enter);
        }
        Err(LpError::IterationLimit)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width;
        let piv = self.a[row * w + col];
        for v in &mut self.a[row * w..(row + 1) * w] {
            *v /= piv;
        }
        self.a[row * w + col] = 1.0;
        let pivot_row: Vec<f64> = self.a[row * w..(row + 1) * w].to_vec();
        for i in 0..self.m {
            if i == row {
                continue;
            }
            let f = self.a[i * w + col];
            if f != 0.0 {
                let r = &mut self.a[i * w..(i + 1) * w];
                for (v, p) in r.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
                r[col] = 0.0;
            }
        }
        let f = self.obj[col];
        if f != 0.0 {
            for (v, p) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
            self.obj[col] = 0.0;
        }
        self.basis[row] = col;
    }

    fn drive_out_artificials(&mut self, first_art: usize) {
        for i in 0..self.m {
            if self.basis[i] < first_art {
                continue;
            }
            let w = self.width;
            if let Some(j) = (0..first_art).find(|&j| self.a[i * w + j].abs() > PIVOT_EPS) {
                self.pivot(i, j);
            }
            // otherwise the row is redundant and its artificial stays basic at zero
        }
    }
}
