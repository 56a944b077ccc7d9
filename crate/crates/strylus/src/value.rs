//! The product value domain: interval x boolean set x automaton x NaN
//! flag, together with the abstract implicit type conversions and the
//! abstract operators for every expression form of the language.
//!
//! Conversions that build word automata (`"true"`, `"NaN"`, numeric
//! strings) require the alphabet to contain the characters involved; the
//! default printable-ASCII alphabet does, and the command line validates
//! custom alphabets up front.

use std::fmt;
use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::automaton::{Cardinality, Dfa, StateId};
use crate::interval::{ArithOp, Bound, Interval};
use crate::strops::cc_abs;
use crate::transforms::widen;

/// Subset of {true, false}; the empty set is bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoolSet {
    pub has_true: bool,
    pub has_false: bool,
}

impl BoolSet {
    pub fn empty() -> BoolSet {
        BoolSet {
            has_true: false,
            has_false: false,
        }
    }

    pub fn both() -> BoolSet {
        BoolSet {
            has_true: true,
            has_false: true,
        }
    }

    pub fn of(b: bool) -> BoolSet {
        BoolSet {
            has_true: b,
            has_false: !b,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.has_true && !self.has_false
    }

    pub fn contains(&self, b: bool) -> bool {
        if b {
            self.has_true
        } else {
            self.has_false
        }
    }

    pub fn union(&self, other: &BoolSet) -> BoolSet {
        BoolSet {
            has_true: self.has_true || other.has_true,
            has_false: self.has_false || other.has_false,
        }
    }

    pub fn inter(&self, other: &BoolSet) -> BoolSet {
        BoolSet {
            has_true: self.has_true && other.has_true,
            has_false: self.has_false && other.has_false,
        }
    }

    pub fn leq(&self, other: &BoolSet) -> bool {
        (!self.has_true || other.has_true) && (!self.has_false || other.has_false)
    }

    pub fn values(&self) -> impl Iterator<Item = bool> + '_ {
        [true, false]
            .into_iter()
            .filter(move |&b| self.contains(b))
    }

    /// Pointwise lift of a binary boolean function.
    pub fn lift2(&self, other: &BoolSet, f: impl Fn(bool, bool) -> bool) -> BoolSet {
        let mut out = BoolSet::empty();
        for x in self.values() {
            for y in other.values() {
                if f(x, y) {
                    out.has_true = true;
                } else {
                    out.has_false = true;
                }
            }
        }
        out
    }
}

impl fmt::Display for BoolSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.has_true, self.has_false) {
            (false, false) => write!(f, "{{}}"),
            (true, false) => write!(f, "{{true}}"),
            (false, true) => write!(f, "{{false}}"),
            (true, true) => write!(f, "{{true,false}}"),
        }
    }
}

/// One abstract primitive value: the product of the four component
/// domains. Bottom is the value whose components are all bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractValue {
    pub int: Interval,
    pub bools: BoolSet,
    pub string: Dfa,
    pub nan: bool,
}

/// Result of an integer conversion: an interval possibly paired with NaN
/// (non-numeric strings convert to NaN, numeric ones to their value).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumOrNaN {
    pub interval: Interval,
    pub nan: bool,
}

impl NumOrNaN {
    pub fn bottom() -> NumOrNaN {
        NumOrNaN {
            interval: Interval::bottom(),
            nan: false,
        }
    }

    pub fn is_bottom(&self) -> bool {
        self.interval.is_bottom() && !self.nan
    }
}

impl AbstractValue {
    pub fn bottom(alphabet: &Arc<Alphabet>) -> AbstractValue {
        AbstractValue {
            int: Interval::bottom(),
            bools: BoolSet::empty(),
            string: Dfa::empty(alphabet),
            nan: false,
        }
    }

    pub fn top(alphabet: &Arc<Alphabet>) -> AbstractValue {
        AbstractValue {
            int: Interval::top(),
            bools: BoolSet::both(),
            string: Dfa::top(alphabet),
            nan: true,
        }
    }

    pub fn of_int(alphabet: &Arc<Alphabet>, v: i64) -> AbstractValue {
        AbstractValue {
            int: Interval::singleton(v),
            ..AbstractValue::bottom(alphabet)
        }
    }

    pub fn of_interval(alphabet: &Arc<Alphabet>, i: Interval) -> AbstractValue {
        AbstractValue {
            int: i,
            ..AbstractValue::bottom(alphabet)
        }
    }

    pub fn of_bool(alphabet: &Arc<Alphabet>, b: bool) -> AbstractValue {
        AbstractValue {
            bools: BoolSet::of(b),
            ..AbstractValue::bottom(alphabet)
        }
    }

    pub fn of_bools(alphabet: &Arc<Alphabet>, bools: BoolSet) -> AbstractValue {
        AbstractValue {
            bools,
            ..AbstractValue::bottom(alphabet)
        }
    }

    pub fn of_string(string: Dfa) -> AbstractValue {
        AbstractValue {
            int: Interval::bottom(),
            bools: BoolSet::empty(),
            nan: false,
            string,
        }
    }

    pub fn of_nan(alphabet: &Arc<Alphabet>) -> AbstractValue {
        AbstractValue {
            nan: true,
            ..AbstractValue::bottom(alphabet)
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        self.string.alphabet()
    }

    pub fn is_bottom(&self) -> bool {
        self.int.is_bottom() && self.bools.is_empty() && self.string.is_empty() && !self.nan
    }

    pub fn lub(&self, other: &AbstractValue) -> AbstractValue {
        AbstractValue {
            int: self.int.lub(&other.int),
            bools: self.bools.union(&other.bools),
            string: self.string.lub(&other.string),
            nan: self.nan || other.nan,
        }
    }

    pub fn glb(&self, other: &AbstractValue) -> AbstractValue {
        AbstractValue {
            int: self.int.glb(&other.int),
            bools: self.bools.inter(&other.bools),
            string: self.string.glb(&other.string),
            nan: self.nan && other.nan,
        }
    }

    pub fn leq(&self, other: &AbstractValue) -> bool {
        self.int.leq(&other.int)
            && self.bools.leq(&other.bools)
            && self.string.leq(&other.string)
            && (!self.nan || other.nan)
    }

    pub fn widen(&self, other: &AbstractValue, n: u32) -> AbstractValue {
        AbstractValue {
            int: self.int.widen(&other.int),
            bools: self.bools.union(&other.bools),
            string: widen(&self.string, &other.string, n),
            nan: self.nan || other.nan,
        }
    }

    /// Restriction to the non-string components; used to route `+`.
    fn without_string(&self) -> AbstractValue {
        AbstractValue {
            string: Dfa::empty(self.alphabet()),
            ..self.clone()
        }
    }

    /// True iff exactly one concrete value is represented, in exactly one
    /// component.
    fn singleton_count(&self) -> Option<u64> {
        let mut populated = 0u32;
        let mut count = 0u64;
        if let Some((lo, hi)) = self.int.bounds() {
            populated += 1;
            match (lo, hi) {
                (Bound::Finite(l), Bound::Finite(h)) if l == h => count += 1,
                _ => return None,
            }
        }
        if !self.bools.is_empty() {
            populated += 1;
            count += self.bools.values().count() as u64;
        }
        if !self.string.is_empty() {
            populated += 1;
            match self.string.cardinality() {
                Cardinality::Finite(n) => count += n,
                Cardinality::Infinite => return None,
            }
        }
        if self.nan {
            populated += 1;
            count += 1;
        }
        if populated == 1 {
            Some(count)
        } else {
            None
        }
    }
}

// ----------------------------------------------------------------------
// numeric-string automata

/// `Σ_Z`: numeric strings, an optional sign followed by digits.
pub fn numeric_strings(alphabet: &Arc<Alphabet>) -> Dfa {
    let mut edges: Vec<(StateId, char, StateId)> = vec![(0, '+', 1), (0, '-', 1)];
    for d in '0'..='9' {
        edges.push((0, d, 2));
        edges.push((1, d, 2));
        edges.push((2, d, 2));
    }
    Dfa::from_parts(alphabet, 3, &edges, 0, &[2]).expect("numeric symbols in alphabet")
}

/// Non-negative numeric strings: an optional `+` followed by digits.
fn nonneg_numeric(alphabet: &Arc<Alphabet>) -> Dfa {
    let mut edges: Vec<(StateId, char, StateId)> = vec![(0, '+', 1)];
    for d in '0'..='9' {
        edges.push((0, d, 2));
        edges.push((1, d, 2));
        edges.push((2, d, 2));
    }
    Dfa::from_parts(alphabet, 3, &edges, 0, &[2]).expect("numeric symbols in alphabet")
}

/// `-`-signed numeric strings.
fn neg_signed_numeric(alphabet: &Arc<Alphabet>) -> Dfa {
    let mut edges: Vec<(StateId, char, StateId)> = vec![(0, '-', 1)];
    for d in '0'..='9' {
        edges.push((1, d, 2));
        edges.push((2, d, 2));
    }
    Dfa::from_parts(alphabet, 3, &edges, 0, &[2]).expect("numeric symbols in alphabet")
}

/// Numeric strings whose value is zero: optional sign, then only `0`s.
fn zero_valued_numeric(alphabet: &Arc<Alphabet>) -> Dfa {
    let edges: Vec<(StateId, char, StateId)> = vec![
        (0, '+', 1),
        (0, '-', 1),
        (0, '0', 2),
        (1, '0', 2),
        (2, '0', 2),
    ];
    Dfa::from_parts(alphabet, 3, &edges, 0, &[2]).expect("numeric symbols in alphabet")
}

// ----------------------------------------------------------------------
// implicit conversions

/// Abstract toBool, the union over all components.
pub fn to_bool_abs(v: &AbstractValue) -> BoolSet {
    let mut out = v.bools;
    if !v.int.is_bottom() {
        if v.int == Interval::singleton(0) {
            out.has_false = true;
        } else if v.int.contains(0) {
            out = out.union(&BoolSet::both());
        } else {
            out.has_true = true;
        }
    }
    if v.nan {
        out.has_false = true;
    }
    if !v.string.is_empty() {
        let epsilon = Dfa::epsilon(v.alphabet());
        if v.string == epsilon {
            out.has_false = true;
        } else if v.string.glb(&epsilon).is_empty() {
            out.has_true = true;
        } else {
            out = out.union(&BoolSet::both());
        }
    }
    out
}

/// Abstract toStr: join of the string component with the string images of
/// the other components.
pub fn to_str_abs(v: &AbstractValue) -> Dfa {
    let sigma = v.alphabet();
    let mut out = v.string.clone();
    if v.bools.has_true {
        out = out.lub(&Dfa::min_of(sigma, ["true"]).expect("alphabet covers 'true'"));
    }
    if v.bools.has_false {
        out = out.lub(&Dfa::min_of(sigma, ["false"]).expect("alphabet covers 'false'"));
    }
    if v.nan {
        out = out.lub(&Dfa::min_of(sigma, ["NaN"]).expect("alphabet covers 'NaN'"));
    }
    out.lub(&interval_to_dfa(&v.int, sigma))
}

/// Finite intervals wider than this are widened to an unbounded form
/// before conversion instead of being enumerated.
const INTERVAL_ENUM_CAP: i64 = 256;

/// String image of an interval: decimal representations of its members.
/// Finite intervals enumerate; unbounded ones use the sign-shaped numeric
/// automata, subtracting the decimal forms below the finite bound.
pub fn interval_to_dfa(i: &Interval, alphabet: &Arc<Alphabet>) -> Dfa {
    let Some((lo, hi)) = i.bounds() else {
        return Dfa::empty(alphabet);
    };
    match (lo, hi) {
        (Bound::Finite(l), Bound::Finite(h)) => {
            if h - l <= INTERVAL_ENUM_CAP {
                let words: Vec<String> = (l..=h).map(|v| v.to_string()).collect();
                Dfa::min_of(alphabet, words).expect("decimal digits in alphabet")
            } else if l >= 0 {
                interval_to_dfa(&Interval::at_least(l), alphabet)
            } else if h <= 0 {
                interval_to_dfa(&Interval::at_most(h), alphabet)
            } else {
                numeric_strings(alphabet)
            }
        }
        (Bound::Finite(l), Bound::PosInf) => {
            if l <= 0 {
                // [l, 0] enumerated, joined with all non-negative forms
                let neg = interval_to_dfa(&Interval::finite(l, 0), alphabet);
                neg.lub(&nonneg_numeric(alphabet))
            } else {
                // non-negative forms minus the decimal strings below l;
                // the subtrahend must stay exact, so past the cap nothing
                // is subtracted at all
                let all = nonneg_numeric(alphabet);
                if l - 1 <= INTERVAL_ENUM_CAP {
                    all.difference(&decimal_range(0, l - 1, alphabet))
                } else {
                    all
                }
            }
        }
        (Bound::NegInf, Bound::Finite(h)) => {
            if h >= 0 {
                let pos = interval_to_dfa(&Interval::finite(0, h), alphabet);
                pos.lub(&nonpos_numeric(alphabet))
            } else {
                let all = nonpos_numeric(alphabet);
                if -h - 1 <= INTERVAL_ENUM_CAP {
                    all.difference(&decimal_range(h + 1, 0, alphabet))
                } else {
                    all
                }
            }
        }
        (Bound::NegInf, Bound::PosInf) => numeric_strings(alphabet),
        _ => unreachable!("invalid interval bounds"),
    }
}

/// `-`-signed digit strings joined with `"0"`; the signed automaton alone
/// would miss the decimal form of zero.
fn nonpos_numeric(alphabet: &Arc<Alphabet>) -> Dfa {
    neg_signed_numeric(alphabet)
        .lub(&Dfa::min_of(alphabet, ["0"]).expect("decimal digits in alphabet"))
}

/// Exactly the decimal forms of `lo..=hi`.
fn decimal_range(lo: i64, hi: i64, alphabet: &Arc<Alphabet>) -> Dfa {
    let words: Vec<String> = (lo..=hi).map(|v| v.to_string()).collect();
    Dfa::min_of(alphabet, words).expect("decimal digits in alphabet")
}

/// Abstract toInt over the whole product value.
pub fn to_int_abs(v: &AbstractValue) -> NumOrNaN {
    let mut interval = v.int;
    if v.bools.has_true {
        interval = interval.lub(&Interval::singleton(1));
    }
    if v.bools.has_false {
        interval = interval.lub(&Interval::singleton(0));
    }
    if v.nan {
        // toInt(NaN) = 0
        interval = interval.lub(&Interval::singleton(0));
    }
    let from_string = dfa_to_interval(&v.string);
    NumOrNaN {
        interval: interval.lub(&from_string.interval),
        nan: from_string.nan,
    }
}

/// Integer image of an automaton: the interval of values of its numeric
/// words, NaN when it accepts non-numeric words.
pub fn dfa_to_interval(a: &Dfa) -> NumOrNaN {
    if a.is_empty() {
        return NumOrNaN::bottom();
    }
    let sigma = a.alphabet();
    let numeric = a.glb(&numeric_strings(sigma));
    let nan = !a.leq(&numeric_strings(sigma));
    if numeric.is_empty() {
        return NumOrNaN {
            interval: Interval::bottom(),
            nan,
        };
    }
    let interval = match numeric.cardinality() {
        Cardinality::Finite(_) => {
            let mut lo = i64::MAX;
            let mut hi = i64::MIN;
            for word in numeric.enumerate().expect("finite") {
                let v = parse_numeric(&word);
                lo = lo.min(v);
                hi = hi.max(v);
            }
            Interval::finite(lo, hi)
        }
        Cardinality::Infinite => {
            let zero = zero_valued_numeric(sigma);
            let strictly_neg = neg_signed_numeric(sigma).difference(&zero);
            let strictly_pos = nonneg_numeric(sigma).difference(&zero);
            let has_neg = !numeric.glb(&strictly_neg).is_empty();
            let has_pos = !numeric.glb(&strictly_pos).is_empty();
            match (has_neg, has_pos) {
                (false, _) => Interval::at_least(0),
                (true, false) => Interval::at_most(0),
                (true, true) => Interval::top(),
            }
        }
    };
    NumOrNaN { interval, nan }
}

/// Value of a numeric string, saturating at the i64 range.
fn parse_numeric(word: &str) -> i64 {
    let (neg, digits) = match word.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, word.strip_prefix('+').unwrap_or(word)),
    };
    let mut value: i64 = 0;
    for c in digits.chars() {
        let d = c.to_digit(10).expect("numeric word") as i64;
        value = value.saturating_mul(10).saturating_add(if neg { -d } else { d });
    }
    value
}

// ----------------------------------------------------------------------
// abstract operators

/// Abstract `+`: concatenation fires when either operand can be a string,
/// integer addition when both operands can be non-strings.
pub fn abs_plus(v1: &AbstractValue, v2: &AbstractValue) -> AbstractValue {
    let concat_left = cc_abs(&v1.string, &to_str_abs(v2));
    let concat_right = cc_abs(&to_str_abs(v1), &v2.string);
    let string = concat_left.lub(&concat_right);
    let n1 = to_int_abs(&v1.without_string());
    let n2 = to_int_abs(&v2.without_string());
    AbstractValue {
        int: Interval::arith(ArithOp::Add, &n1.interval, &n2.interval),
        bools: BoolSet::empty(),
        string,
        nan: n1.nan || n2.nan,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumOp {
    Sub,
    Mul,
    Div,
}

/// Abstract `-`, `*`, `/`: both operands are converted to integers; NaN
/// conversions and a possibly-zero divisor make the result possibly NaN.
pub fn abs_num(op: NumOp, v1: &AbstractValue, v2: &AbstractValue) -> AbstractValue {
    let sigma = v1.alphabet();
    let n1 = to_int_abs(v1);
    let n2 = to_int_abs(v2);
    let arith = match op {
        NumOp::Sub => ArithOp::Sub,
        NumOp::Mul => ArithOp::Mul,
        NumOp::Div => ArithOp::Div,
    };
    let mut nan = n1.nan || n2.nan;
    if op == NumOp::Div && n2.interval.contains(0) {
        nan = true;
    }
    AbstractValue {
        int: Interval::arith(arith, &n1.interval, &n2.interval),
        bools: BoolSet::empty(),
        string: Dfa::empty(sigma),
        nan,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogicOp {
    And,
    Or,
}

pub fn abs_logic(op: LogicOp, v1: &AbstractValue, v2: &AbstractValue) -> AbstractValue {
    let t1 = to_bool_abs(v1);
    let t2 = to_bool_abs(v2);
    let bools = match op {
        LogicOp::And => t1.lift2(&t2, |x, y| x && y),
        LogicOp::Or => t1.lift2(&t2, |x, y| x || y),
    };
    AbstractValue::of_bools(v1.alphabet(), bools)
}

pub fn abs_not(v: &AbstractValue) -> AbstractValue {
    let t = to_bool_abs(v);
    AbstractValue::of_bools(
        v.alphabet(),
        BoolSet {
            has_true: t.has_false,
            has_false: t.has_true,
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Gt,
}

/// Abstract `<` / `>`: operands are converted to integers and the interval
/// orderings decide; a possibly-NaN operand adds `false`.
pub fn abs_cmp(op: CmpOp, v1: &AbstractValue, v2: &AbstractValue) -> AbstractValue {
    // the NaN value compares as false, never as toInt(NaN) = 0, so it is
    // stripped before the integer view is taken
    let strip = |v: &AbstractValue| AbstractValue {
        nan: false,
        ..v.clone()
    };
    let n1 = to_int_abs(&strip(v1));
    let n2 = to_int_abs(&strip(v2));
    let (a, b) = match op {
        CmpOp::Lt => (&n1, &n2),
        CmpOp::Gt => (&n2, &n1),
    };
    let mut out = BoolSet::empty();
    if let (Some((alo, ahi)), Some((blo, bhi))) = (a.interval.bounds(), b.interval.bounds()) {
        if ahi < blo {
            out.has_true = true;
        } else if bhi <= alo {
            out.has_false = true;
        } else {
            out = BoolSet::both();
        }
    }
    // a possibly-NaN side (the value, or a non-numeric string) compares
    // false against any value of the other side
    if ((v1.nan || n1.nan) && !v2.is_bottom()) || ((v2.nan || n2.nan) && !v1.is_bottom()) {
        out.has_false = true;
    }
    AbstractValue::of_bools(v1.alphabet(), out)
}

/// Abstract `==` (strict): `{true}` only for equal singletons, `{false}`
/// when the concretizations are provably disjoint.
pub fn abs_eq(v1: &AbstractValue, v2: &AbstractValue) -> AbstractValue {
    let sigma = v1.alphabet();
    if v1.is_bottom() || v2.is_bottom() {
        return AbstractValue::of_bools(sigma, BoolSet::empty());
    }
    if v1.singleton_count() == Some(1) && v2.singleton_count() == Some(1) && v1 == v2 {
        return AbstractValue::of_bool(sigma, true);
    }
    if v1.glb(v2).is_bottom() {
        return AbstractValue::of_bool(sigma, false);
    }
    AbstractValue::of_bools(sigma, BoolSet::both())
}

impl fmt::Display for AbstractValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_bottom() {
            return write!(f, "⊥");
        }
        let string = match self.string.cardinality() {
            Cardinality::Finite(n) if n <= 32 => {
                let words: Vec<String> = self
                    .string
                    .enumerate()
                    .expect("finite")
                    .into_iter()
                    .map(|w| format!("{w:?}"))
                    .collect();
                format!("{{{}}}", words.join(","))
            }
            _ => format!("<dfa:{} states>", self.string.num_states()),
        };
        write!(
            f,
            "(int={}, bool={}, string={}, nan={})",
            self.int, self.bools, string, self.nan
        )
    }
}
