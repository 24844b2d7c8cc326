//! Plain-text pieces of the human summaries.

use std::fmt::Write;

use vetotalk_core::{Classification, Halfspace, Rational};

pub fn point(x: &[Rational]) -> String {
    let parts: Vec<String> = x.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// `a·x ≤ b` with zero terms dropped, e.g. `-x1 + x2 <= -30`.
pub fn row(h: &Halfspace) -> String {
    let mut out = String::new();
    for (i, c) in h.normal.iter().enumerate() {
        if c == &Rational::from_integer(0.into()) {
            continue;
        }
        let neg = c < &Rational::from_integer(0.into());
        let mag = if neg { -c.clone() } else { c.clone() };
        let sep = match (out.is_empty(), neg) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        out.push_str(sep);
        if mag != Rational::from_integer(1.into()) {
            let _ = write!(out, "{mag}*");
        }
        let _ = write!(out, "x{}", i + 1);
    }
    if out.is_empty() {
        out.push('0');
    }
    let _ = write!(out, " <= {}", h.rhs);
    out
}

pub fn classification(c: Classification) -> (&'static str, Option<usize>) {
    match c {
        Classification::Partition => ("Partition", None),
        Classification::Pairwise3 => ("Pairwise3", None),
        Classification::Chain3 { pivot } => ("Chain3", Some(pivot)),
        Classification::Other => ("Other", None),
    }
}

pub fn verdict(holds: bool) -> &'static str {
    if holds {
        "holds"
    } else {
        "violated"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn rows_read_naturally() {
        assert_eq!(row(&Halfspace::new(vec![q(-1), q(1)], q(-30))), "-x1 + x2 <= -30");
        assert_eq!(row(&Halfspace::new(vec![q(0), q(-2)], q(0))), "-2*x2 <= 0");
        assert_eq!(row(&Halfspace::new(vec![q(0), q(0)], q(1))), "0 <= 1");
    }

    #[test]
    fn points_use_exact_fractions() {
        assert_eq!(point(&[Rational::new(3.into(), 5.into()), q(0)]), "(3/5, 0)");
    }
}
