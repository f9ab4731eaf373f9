use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::CycNumber;

pub(crate) fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn fmt_power(k: usize) -> String {
    if k == 1 {
        "w".to_string()
    } else {
        format!("w^{k}")
    }
}

impl CycNumber {
    /// Terms `c*w^k` in increasing k, with `w` standing for ζ of the current
    /// conductor. Zero renders as `0`.
    pub fn terms_string(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            let body = match (k, mag.is_one()) {
                (0, _) => fmt_rational(&mag),
                (_, true) => fmt_power(k),
                (_, false) => format!("{}*{}", fmt_rational(&mag), fmt_power(k)),
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Terms after promotion to conductor `m`; panics if the conductor does
    /// not divide `m`.
    pub fn terms_string_at(&self, m: u32) -> String {
        self.rebase(m).expect("document conductor must be a common multiple").terms_string()
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conductor {}: {}", self.conductor(), self.terms_string())
    }
}
