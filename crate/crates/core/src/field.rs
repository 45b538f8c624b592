use crate::expr::{EvalError, EvalErrorKind};
use crate::geometry::Point2;

/// A real-valued function of two real variables.
///
/// Implementations report points where the function is undefined as an
/// [`EvalError`] instead of returning NaN or an infinity.
pub trait ScalarField {
    fn value(&self, p: Point2) -> Result<f64, EvalError>;
}

impl<F> ScalarField for F
where
    F: Fn(f64, f64) -> f64,
{
    fn value(&self, p: Point2) -> Result<f64, EvalError> {
        let z = self(p.x(), p.y());
        if z.is_finite() {
            Ok(z)
        } else {
            Err(EvalError::new(EvalErrorKind::NonFinite, "<closure>", p))
        }
    }
}
