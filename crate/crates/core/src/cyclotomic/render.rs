use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::exact::Rational;

/// Writes `sum c_j * var^j` in the given term order, e.g. `1/3 + 2/3*z - z^2`.
pub(crate) fn write_terms<I>(f: &mut fmt::Formatter<'_>, var: &str, terms: I) -> fmt::Result
where
    I: Iterator<Item = (usize, Rational)>,
{
    let mut first = true;
    for (j, c) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let abs = c.abs();
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        let monomial = match j {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{j}"),
        };
        match (monomial.is_empty(), abs.is_one()) {
            (true, _) => write!(f, "{abs}")?,
            (false, true) => f.write_str(&monomial)?,
            (false, false) => write!(f, "{abs}*{monomial}")?,
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}
