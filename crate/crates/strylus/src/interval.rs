//! The integer interval domain.
//!
//! Bounds live in `i64` extended with infinities. Arithmetic on bounds is
//! carried out in `i128` and clamped outward on overflow, so results only
//! ever get wider than the mathematical interval. This matches the
//! concrete interpreter, whose integers saturate at the `i64` range.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    NegInf,
    Finite(i64),
    PosInf,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => write!(f, "-inf"),
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::PosInf => write!(f, "+inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Interval {
    Bottom,
    /// Invariant: lo <= hi, lo != +inf, hi != -inf.
    Range(Bound, Bound),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Interval {
    pub fn bottom() -> Interval {
        Interval::Bottom
    }

    pub fn top() -> Interval {
        Interval::Range(Bound::NegInf, Bound::PosInf)
    }

    pub fn singleton(v: i64) -> Interval {
        Interval::Range(Bound::Finite(v), Bound::Finite(v))
    }

    pub fn finite(lo: i64, hi: i64) -> Interval {
        assert!(lo <= hi);
        Interval::Range(Bound::Finite(lo), Bound::Finite(hi))
    }

    pub fn at_least(lo: i64) -> Interval {
        Interval::Range(Bound::Finite(lo), Bound::PosInf)
    }

    pub fn at_most(hi: i64) -> Interval {
        Interval::Range(Bound::NegInf, Bound::Finite(hi))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Interval::Bottom)
    }

    pub fn bounds(&self) -> Option<(Bound, Bound)> {
        match *self {
            Interval::Bottom => None,
            Interval::Range(lo, hi) => Some((lo, hi)),
        }
    }

    pub fn contains(&self, v: i64) -> bool {
        match *self {
            Interval::Bottom => false,
            Interval::Range(lo, hi) => {
                Bound::Finite(v) >= lo && Bound::Finite(v) <= hi
            }
        }
    }

    pub fn lub(&self, other: &Interval) -> Interval {
        match (self.bounds(), other.bounds()) {
            (None, _) => *other,
            (_, None) => *self,
            (Some((l1, h1)), Some((l2, h2))) => Interval::Range(l1.min(l2), h1.max(h2)),
        }
    }

    pub fn glb(&self, other: &Interval) -> Interval {
        match (self.bounds(), other.bounds()) {
            (Some((l1, h1)), Some((l2, h2))) => {
                let lo = l1.max(l2);
                let hi = h1.min(h2);
                if lo <= hi {
                    Interval::Range(lo, hi)
                } else {
                    Interval::Bottom
                }
            }
            _ => Interval::Bottom,
        }
    }

    pub fn leq(&self, other: &Interval) -> bool {
        match (self.bounds(), other.bounds()) {
            (None, _) => true,
            (_, None) => false,
            (Some((l1, h1)), Some((l2, h2))) => l2 <= l1 && h1 <= h2,
        }
    }

    /// Standard interval widening: unstable bounds jump to infinity.
    pub fn widen(&self, other: &Interval) -> Interval {
        match (self.bounds(), other.bounds()) {
            (None, _) => *other,
            (_, None) => *self,
            (Some((l1, h1)), Some((l2, h2))) => {
                let lo = if l2 < l1 { Bound::NegInf } else { l1 };
                let hi = if h2 > h1 { Bound::PosInf } else { h1 };
                Interval::Range(lo, hi)
            }
        }
    }

    /// Negative parts collapse to zero.
    pub fn clamp_nonneg(&self) -> Interval {
        match *self {
            Interval::Bottom => Interval::Bottom,
            Interval::Range(lo, hi) => {
                let lo = lo.max(Bound::Finite(0));
                let hi = hi.max(Bound::Finite(0));
                Interval::Range(lo, hi)
            }
        }
    }

    pub fn arith(op: ArithOp, a: &Interval, b: &Interval) -> Interval {
        let (Some((l1, h1)), Some((l2, h2))) = (a.bounds(), b.bounds()) else {
            return Interval::Bottom;
        };
        match op {
            ArithOp::Add => range_from(ext_add(l1, l2), ext_add(h1, h2)),
            ArithOp::Sub => range_from(ext_sub(l1, h2), ext_sub(h1, l2)),
            ArithOp::Mul => {
                let candidates = [
                    ext_mul(l1, l2),
                    ext_mul(l1, h2),
                    ext_mul(h1, l2),
                    ext_mul(h1, h2),
                ];
                hull(&candidates)
            }
            ArithOp::Div => div_range(l1, h1, l2, h2),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Bottom => write!(f, "⊥"),
            Interval::Range(lo, hi) => write!(f, "[{lo},{hi}]"),
        }
    }
}

// extended arithmetic on bounds; finite results computed in i128

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Ext {
    NegInf,
    Fin(i128),
    PosInf,
}

fn to_ext(b: Bound) -> Ext {
    match b {
        Bound::NegInf => Ext::NegInf,
        Bound::Finite(v) => Ext::Fin(v as i128),
        Bound::PosInf => Ext::PosInf,
    }
}

/// Clamps outward: values past the i64 range become infinities on the side
/// they exceed, keeping intervals sound for the saturating concrete
/// semantics.
fn clamp_lo(e: Ext) -> Bound {
    match e {
        Ext::NegInf => Bound::NegInf,
        Ext::PosInf => Bound::Finite(i64::MAX),
        Ext::Fin(v) if v < i64::MIN as i128 => Bound::NegInf,
        Ext::Fin(v) if v > i64::MAX as i128 => Bound::Finite(i64::MAX),
        Ext::Fin(v) => Bound::Finite(v as i64),
    }
}

fn clamp_hi(e: Ext) -> Bound {
    match e {
        Ext::NegInf => Bound::Finite(i64::MIN),
        Ext::PosInf => Bound::PosInf,
        Ext::Fin(v) if v > i64::MAX as i128 => Bound::PosInf,
        Ext::Fin(v) if v < i64::MIN as i128 => Bound::Finite(i64::MIN),
        Ext::Fin(v) => Bound::Finite(v as i64),
    }
}

fn range_from(lo: Ext, hi: Ext) -> Interval {
    Interval::Range(clamp_lo(lo), clamp_hi(hi))
}

fn hull(candidates: &[Ext]) -> Interval {
    let lo = *candidates.iter().min().expect("non-empty");
    let hi = *candidates.iter().max().expect("non-empty");
    range_from(lo, hi)
}

fn ext_add(a: Bound, b: Bound) -> Ext {
    match (to_ext(a), to_ext(b)) {
        (Ext::NegInf, _) | (_, Ext::NegInf) => Ext::NegInf,
        (Ext::PosInf, _) | (_, Ext::PosInf) => Ext::PosInf,
        (Ext::Fin(x), Ext::Fin(y)) => Ext::Fin(x + y),
    }
}

fn ext_sub(a: Bound, b: Bound) -> Ext {
    match (to_ext(a), to_ext(b)) {
        (Ext::NegInf, _) | (_, Ext::PosInf) => Ext::NegInf,
        (Ext::PosInf, _) | (_, Ext::NegInf) => Ext::PosInf,
        (Ext::Fin(x), Ext::Fin(y)) => Ext::Fin(x - y),
    }
}

fn ext_mul(a: Bound, b: Bound) -> Ext {
    match (to_ext(a), to_ext(b)) {
        (Ext::Fin(0), _) | (_, Ext::Fin(0)) => Ext::Fin(0),
        (Ext::Fin(x), Ext::Fin(y)) => Ext::Fin(x * y),
        (x, y) => {
            let x_neg = matches!(x, Ext::NegInf) || matches!(x, Ext::Fin(v) if v < 0);
            let y_neg = matches!(y, Ext::NegInf) || matches!(y, Ext::Fin(v) if v < 0);
            if x_neg == y_neg {
                Ext::PosInf
            } else {
                Ext::NegInf
            }
        }
    }
}

/// Division with truncation toward zero; the divisor 0 is excluded from
/// the computation (the value layer turns a possible zero divisor into
/// NaN). Bottom when the divisor can only be zero.
fn div_range(l1: Bound, h1: Bound, l2: Bound, h2: Bound) -> Interval {
    let mut parts: Vec<(Bound, Bound)> = Vec::new();
    // positive part of the divisor
    let plo = l2.max(Bound::Finite(1));
    if plo <= h2 {
        parts.push((plo, h2));
    }
    // negative part of the divisor
    let nhi = h2.min(Bound::Finite(-1));
    if l2 <= nhi {
        parts.push((l2, nhi));
    }
    if parts.is_empty() {
        return Interval::Bottom;
    }
    let mut candidates = Vec::new();
    for (dl, dh) in parts {
        for num in [l1, h1] {
            for den in [dl, dh] {
                candidates.extend(ext_div(num, den));
            }
        }
    }
    hull(&candidates)
}

/// Quotient candidates for one numerator/denominator bound pair. The
/// denominator never represents zero here.
fn ext_div(num: Bound, den: Bound) -> Vec<Ext> {
    match (to_ext(num), to_ext(den)) {
        (Ext::Fin(x), Ext::Fin(y)) => vec![Ext::Fin(x / y)],
        // finite / infinite truncates to zero
        (Ext::Fin(_), _) => vec![Ext::Fin(0)],
        // infinite / finite keeps the signed infinity
        (Ext::NegInf, Ext::Fin(y)) => vec![if y > 0 { Ext::NegInf } else { Ext::PosInf }],
        (Ext::PosInf, Ext::Fin(y)) => vec![if y > 0 { Ext::PosInf } else { Ext::NegInf }],
        // infinite / infinite covers everything from 0 to the signed infinity
        (Ext::NegInf, Ext::NegInf) | (Ext::PosInf, Ext::PosInf) => {
            vec![Ext::Fin(0), Ext::PosInf]
        }
        (Ext::NegInf, Ext::PosInf) | (Ext::PosInf, Ext::NegInf) => {
            vec![Ext::Fin(0), Ext::NegInf]
        }
    }
}
