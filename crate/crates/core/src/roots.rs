//! Bracketed scalar root finding.

/// Outcome of a bracketed search on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum RootSearch {
    Found(f64),
    /// The function is zero at both ends of the bracket.
    Flat,
    NoSignChange {
        f_lo: f64,
        f_hi: f64,
    },
}

/// Plain bisection. Stops once the half-width is below `x_tol` and the
/// residual at the midpoint is below `f_tol`, or after `max_iter` halvings.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Bisection {
    pub x_tol: f64,
    pub f_tol: f64,
    pub max_iter: usize,
}

impl Bisection {
    pub fn new(x_tol: f64, f_tol: f64) -> Self {
        Self {
            x_tol,
            f_tol,
            max_iter: 200,
        }
    }

    pub fn solve<F, E>(&self, mut lo: f64, mut hi: f64, mut f: F) -> Result<RootSearch, E>
    where
        F: FnMut(f64) -> Result<f64, E>,
    {
        let f_lo = f(lo)?;
        let f_hi = if hi == lo { f_lo } else { f(hi)? };
        if f_lo == 0.0 && f_hi == 0.0 {
            return Ok(RootSearch::Flat);
        }
        if f_lo == 0.0 {
            return Ok(RootSearch::Found(lo));
        }
        if f_hi == 0.0 {
            return Ok(RootSearch::Found(hi));
        }
        if f_lo.signum() == f_hi.signum() {
            return Ok(RootSearch::NoSignChange { f_lo, f_hi });
        }
        let lo_negative = f_lo < 0.0;
        let mut mid = 0.5 * (lo + hi);
        for _ in 0..self.max_iter {
            mid = 0.5 * (lo + hi);
            let fm = f(mid)?;
            if fm == 0.0 || (fm.abs() <= self.f_tol && 0.5 * (hi - lo) <= self.x_tol) {
                return Ok(RootSearch::Found(mid));
            }
            if (fm < 0.0) == lo_negative {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(RootSearch::Found(mid))
    }
}
