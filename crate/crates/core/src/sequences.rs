//! Log-polynomial sequences `C * n^a * log(n+s)^b * log(log(n+s))^d`.
//!
//! The family is closed under products and real powers, and under `log` up to
//! the leading term, which is all that is needed to decide the asymptotic
//! conditions on `k_n`, `eps_n` and `M_n` by exponent arithmetic. The shift
//! `s` enters evaluation only; it never changes an asymptotic comparison.
//!
//! The iterated factor is evaluated as `log(1 + log(n+s))` so that it stays
//! positive for every `n >= 2`; this differs from `log log n` by `o(1)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogPolySeq {
    pub coeff: f64,
    pub npow: f64,
    pub logpow: f64,
    pub shift: f64,
    /// Exponent of the iterated logarithm; nonzero only after `seq_log` of a
    /// purely logarithmic sequence or in parsed input.
    #[serde(default)]
    pub loglogpow: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", content = "value", rename_all = "snake_case")]
pub enum GrowthClass {
    ToZero,
    ToConst(f64),
    ToInfinity,
}

impl LogPolySeq {
    pub fn new(coeff: f64, npow: f64, logpow: f64, shift: f64) -> Result<Self> {
        Self::with_loglog(coeff, npow, logpow, 0.0, shift)
    }

    pub fn with_loglog(coeff: f64, npow: f64, logpow: f64, loglogpow: f64, shift: f64) -> Result<Self> {
        if !(coeff.is_finite() && coeff > 0.0) {
            return Err(invalid(format!("sequence coefficient must be positive, got {coeff}")));
        }
        if !(npow.is_finite() && logpow.is_finite() && loglogpow.is_finite()) {
            return Err(invalid("sequence exponents must be finite"));
        }
        if !(shift.is_finite() && shift >= 0.0) {
            return Err(invalid(format!("log shift must be nonnegative, got {shift}")));
        }
        Ok(Self {
            coeff,
            npow,
            logpow,
            shift,
            loglogpow,
        })
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::new(c, 0.0, 0.0, 0.0)
    }

    /// The sequence `n`.
    pub fn identity() -> Self {
        Self {
            coeff: 1.0,
            npow: 1.0,
            logpow: 0.0,
            shift: 0.0,
            loglogpow: 0.0,
        }
    }

    fn has_log(&self) -> bool {
        self.logpow != 0.0 || self.loglogpow != 0.0
    }

    /// Exponent vector in decreasing order of growth.
    pub fn exponents(&self) -> [f64; 3] {
        [self.npow, self.logpow, self.loglogpow]
    }

    pub fn eval(&self, n: u64) -> Result<f64> {
        seq_eval(self, n)
    }

    pub fn growth(&self) -> GrowthClass {
        growth_class(self)
    }
}

pub fn seq_eval(s: &LogPolySeq, n: u64) -> Result<f64> {
    if n < 2 {
        return Err(domain(format!("sequences are evaluated for n >= 2, got {n}")));
    }
    Ok(eval_real(s, n as f64))
}

/// Evaluation at real `n`; used where a continuous argument is convenient.
pub(crate) fn eval_real(s: &LogPolySeq, n: f64) -> f64 {
    let mut v = s.coeff;
    if s.npow != 0.0 {
        v *= n.powf(s.npow);
    }
    if s.has_log() {
        let l = (n + s.shift).ln();
        if s.logpow != 0.0 {
            v *= l.powf(s.logpow);
        }
        if s.loglogpow != 0.0 {
            v *= l.ln_1p().powf(s.loglogpow);
        }
    }
    v
}

fn merged_shift(sa: &LogPolySeq, sb: &LogPolySeq) -> Result<f64> {
    match (sa.has_log(), sb.has_log()) {
        (true, true) if sa.shift != sb.shift => Err(invalid(format!(
            "cannot multiply log factors with different shifts ({} and {})",
            sa.shift, sb.shift
        ))),
        (true, _) => Ok(sa.shift),
        (false, true) => Ok(sb.shift),
        (false, false) => Ok(0.0),
    }
}

pub fn seq_mul(sa: &LogPolySeq, sb: &LogPolySeq) -> Result<LogPolySeq> {
    let shift = merged_shift(sa, sb)?;
    LogPolySeq::with_loglog(
        sa.coeff * sb.coeff,
        sa.npow + sb.npow,
        sa.logpow + sb.logpow,
        sa.loglogpow + sb.loglogpow,
        shift,
    )
}

pub fn seq_pow(s: &LogPolySeq, r: f64) -> Result<LogPolySeq> {
    if !r.is_finite() {
        return Err(invalid(format!("power must be finite, got {r}")));
    }
    let mut out = LogPolySeq::with_loglog(
        s.coeff.powf(r),
        s.npow * r,
        s.logpow * r,
        s.loglogpow * r,
        s.shift,
    )?;
    if !out.has_log() {
        out.shift = 0.0;
    }
    Ok(out)
}

/// Leading term of `log s_n`.
///
/// `a > 0` gives `a log n`; `a = 0, b > 0` gives `b log log n`. Anything else
/// either does not diverge or leaves the family.
pub fn seq_log(s: &LogPolySeq) -> Result<LogPolySeq> {
    if s.npow > 0.0 {
        LogPolySeq::new(s.npow, 0.0, 1.0, s.shift)
    } else if s.npow == 0.0 && s.logpow > 0.0 {
        LogPolySeq::with_loglog(s.logpow, 0.0, 0.0, 1.0, s.shift)
    } else if s.npow == 0.0 && s.logpow == 0.0 && s.loglogpow == 0.0 {
        Err(domain("log of a constant sequence is not a growth sequence"))
    } else {
        Err(domain(format!(
            "log of {s} does not diverge to +infinity inside the family"
        )))
    }
}

/// Full expansion `log s_n = a log n + b log log n + d log log log n + log C + o(1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogExpansion {
    pub terms: [f64; 3],
    pub constant: f64,
}

pub fn log_expansion(s: &LogPolySeq) -> LogExpansion {
    LogExpansion {
        terms: s.exponents(),
        constant: s.coeff.ln(),
    }
}

fn classify_exponents(exps: [f64; 3], coeff: f64) -> GrowthClass {
    for e in exps {
        match e.partial_cmp(&0.0) {
            Some(Ordering::Greater) => return GrowthClass::ToInfinity,
            Some(Ordering::Less) => return GrowthClass::ToZero,
            _ => {}
        }
    }
    GrowthClass::ToConst(coeff)
}

pub fn growth_class(s: &LogPolySeq) -> GrowthClass {
    classify_exponents(s.exponents(), s.coeff)
}

/// Growth class of `sa / sb`. Shifts are ignored.
pub fn ratio_limit(sa: &LogPolySeq, sb: &LogPolySeq) -> GrowthClass {
    let (ea, eb) = (sa.exponents(), sb.exponents());
    classify_exponents(
        [ea[0] - eb[0], ea[1] - eb[1], ea[2] - eb[2]],
        sa.coeff / sb.coeff,
    )
}

impl fmt::Display for LogPolySeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        if self.npow != 0.0 {
            write!(f, " * n^{}", self.npow)?;
        }
        let arg = if self.shift == 0.0 {
            "n".to_string()
        } else {
            format!("n+{}", self.shift)
        };
        if self.logpow != 0.0 {
            write!(f, " * log({arg})^{}", self.logpow)?;
        }
        if self.loglogpow != 0.0 {
            write!(f, " * log(log({arg}))^{}", self.loglogpow)?;
        }
        Ok(())
    }
}

impl FromStr for LogPolySeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Parser::new(s).parse()
    }
}

pub fn parse_seq(s: &str) -> Result<LogPolySeq> {
    s.parse()
}

// Grammar:
//   expr   := factor (('*' | '/') factor)*
//   factor := atom ('^' exponent)?
//   atom   := number | 'n' | 'log' '(' logarg ')' | 'sqrt' '(' expr ')' | '(' expr ')'
//   logarg := 'n' ('+' number)? | 'log' '(' 'n' ('+' number)? ')'
//   exponent := signed number | '(' signed number ('/' signed number)? ')'
struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.err(format!("expected '{c}', found '{found}'")),
                None => self.err(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if rest.starts_with(word)
            && !rest[word.len()..]
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        if end < bytes.len() && (bytes[end] == b'-' || bytes[end] == b'+') {
            end += 1;
        }
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut e = end + 1;
            if e < bytes.len() && (bytes[e] == b'-' || bytes[e] == b'+') {
                e += 1;
            }
            if e < bytes.len() && bytes[e].is_ascii_digit() {
                while e < bytes.len() && bytes[e].is_ascii_digit() {
                    e += 1;
                }
                end = e;
            }
        }
        match self.src[start..end].parse::<f64>() {
            Ok(v) if v.is_finite() => {
                self.pos = end;
                Ok(v)
            }
            _ => self.err("expected a number"),
        }
    }

    fn parse(mut self) -> Result<LogPolySeq> {
        if self.peek().is_none() {
            return self.err("empty sequence expression");
        }
        let s = self.expr()?;
        if let Some(c) = self.peek() {
            return self.err(format!("unexpected '{c}'"));
        }
        Ok(s)
    }

    fn expr(&mut self) -> Result<LogPolySeq> {
        let mut acc = self.factor()?;
        loop {
            let at = self.pos;
            if self.eat('*') {
                let rhs = self.factor()?;
                acc = self.combine(at, seq_mul(&acc, &rhs))?;
            } else if self.eat('/') {
                let rhs = self.factor()?;
                let inv = self.combine(at, seq_pow(&rhs, -1.0))?;
                acc = self.combine(at, seq_mul(&acc, &inv))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn combine(&self, at: usize, r: Result<LogPolySeq>) -> Result<LogPolySeq> {
        r.map_err(|e| Error::Parse {
            position: at,
            message: e.to_string(),
        })
    }

    fn factor(&mut self) -> Result<LogPolySeq> {
        let base = self.atom()?;
        let at = self.pos;
        if self.eat('^') {
            let r = self.exponent()?;
            self.combine(at, seq_pow(&base, r))
        } else {
            Ok(base)
        }
    }

    fn exponent(&mut self) -> Result<f64> {
        if self.eat('(') {
            let num = self.number()?;
            let v = if self.eat('/') {
                let den = self.number()?;
                if den == 0.0 {
                    return self.err("zero denominator in exponent");
                }
                num / den
            } else {
                num
            };
            self.expect(')')?;
            Ok(v)
        } else {
            self.number()
        }
    }

    fn atom(&mut self) -> Result<LogPolySeq> {
        match self.peek() {
            None => self.err("expected a term, found end of input"),
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let at = self.pos;
                let v = self.number()?;
                self.combine(at, LogPolySeq::constant(v))
            }
            Some(_) => {
                if self.keyword("n") {
                    Ok(LogPolySeq::identity())
                } else if self.keyword("sqrt") {
                    self.expect('(')?;
                    let at = self.pos;
                    let inner = self.expr()?;
                    self.expect(')')?;
                    self.combine(at, seq_pow(&inner, 0.5))
                } else if self.keyword("log") {
                    self.expect('(')?;
                    let s = if self.keyword("log") {
                        self.expect('(')?;
                        let shift = self.log_arg()?;
                        self.expect(')')?;
                        LogPolySeq::with_loglog(1.0, 0.0, 0.0, 1.0, shift)
                    } else {
                        let shift = self.log_arg()?;
                        LogPolySeq::new(1.0, 0.0, 1.0, shift)
                    };
                    self.expect(')')?;
                    s
                } else {
                    let found = self.peek_raw().unwrap_or(' ');
                    self.err(format!("unexpected '{found}'"))
                }
            }
        }
    }

    fn log_arg(&mut self) -> Result<f64> {
        if !self.keyword("n") {
            return self.err("log argument must be n or n+s");
        }
        if self.eat('+') {
            let at = self.pos;
            let s = self.number()?;
            if s < 0.0 {
                self.pos = at;
                return self.err("log shift must be nonnegative");
            }
            Ok(s)
        } else {
            Ok(0.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LogPolySeq {
        s.parse().unwrap()
    }

    #[test]
    fn eval_examples() {
        let s = LogPolySeq::new(1.0, 0.0, 1.0, 1.0).unwrap();
        assert!((seq_eval(&s, 2).unwrap() - 1.098_612_288_668_109_7).abs() < 1e-15);
        assert_eq!(seq_eval(&LogPolySeq::identity(), 1000).unwrap(), 1000.0);
        let eps = p("n^-1 * log(n)^2");
        assert!((seq_eval(&eps, 1000).unwrap() - 0.047_717_082_994_305_58).abs() < 1e-16);
        assert!(seq_eval(&eps, 1).is_err());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(p("1.0 * n^-1 * log(n+1)^2"), LogPolySeq::new(1.0, -1.0, 2.0, 1.0).unwrap());
        assert_eq!(p("sqrt(log(n+1))"), LogPolySeq::new(1.0, 0.0, 0.5, 1.0).unwrap());
        assert_eq!(p("(log(n+1))^(1/2)"), LogPolySeq::new(1.0, 0.0, 0.5, 1.0).unwrap());
        assert_eq!(p("3*log(n)/n"), LogPolySeq::new(3.0, -1.0, 1.0, 0.0).unwrap());
        assert_eq!(p("2 * log(log(n))"), LogPolySeq::with_loglog(2.0, 0.0, 0.0, 1.0, 0.0).unwrap());
        assert_eq!(p("n"), LogPolySeq::identity());
        assert_eq!(p("1e-2"), LogPolySeq::constant(0.01).unwrap());
    }

    #[test]
    fn parse_errors_report_position() {
        let cases = [
            ("n^", 2),
            ("2 * m", 4),
            ("log(x)", 4),
            ("n * (log(n)", 11),
            ("", 0),
            ("n n", 2),
            ("log(n+1) * log(n)", 9),
        ];
        for (src, pos) in cases {
            match src.parse::<LogPolySeq>() {
                Err(Error::Parse { position, .. }) => assert_eq!(position, pos, "{src}"),
                other => panic!("{src}: {other:?}"),
            }
        }
    }

    #[test]
    fn display_round_trip() {
        for s in [
            "1.0 * n^-1 * log(n+1)^2",
            "0.3 * n^0.25",
            "7",
            "2 * log(log(n+2))^1.5 * n^-0.5",
        ] {
            let a = p(s);
            assert_eq!(p(&a.to_string()), a, "{s} -> {a}");
        }
    }

    #[test]
    fn algebra_examples() {
        let n = LogPolySeq::identity();
        let logn = p("log(n)");
        let prod = seq_mul(&n, &p("n^-1 * log(n)")).unwrap();
        assert_eq!((prod.npow, prod.logpow), (0.0, 1.0));
        assert_eq!(seq_pow(&logn, 2.0).unwrap(), p("log(n)^2"));
        assert_eq!(seq_log(&n).unwrap(), logn);
        let ll = seq_log(&p("log(n)^2")).unwrap();
        assert_eq!((ll.coeff, ll.loglogpow, ll.logpow), (2.0, 1.0, 0.0));
        assert!(seq_log(&p("5")).is_err());
        assert!(seq_log(&p("n^-1")).is_err());
        assert!(seq_mul(&p("log(n+1)"), &p("log(n)")).is_err());
        assert!(seq_mul(&p("log(n+1)"), &p("n^2")).is_ok());
    }

    #[test]
    fn growth_examples() {
        let n = LogPolySeq::identity();
        let g = |s: &str| growth_class(&seq_mul(&p(s), &n).unwrap());
        assert_eq!(g("n^-1 * log(n)"), GrowthClass::ToInfinity);
        assert_eq!(g("n^-1"), GrowthClass::ToConst(1.0));
        assert_eq!(g("n^-1.5"), GrowthClass::ToZero);
        assert_eq!(growth_class(&p("log(log(n))^-1")), GrowthClass::ToZero);
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(ratio_limit(&p("log(n)"), &p("log(n)^0.9")), GrowthClass::ToInfinity);
        assert_eq!(ratio_limit(&p("log(n)^0.5"), &p("log(n)^0.6")), GrowthClass::ToZero);
        assert_eq!(ratio_limit(&p("3*log(n)^1.5"), &p("log(n)^1.5")), GrowthClass::ToConst(3.0));
        assert_eq!(ratio_limit(&p("log(n+1)"), &p("log(n)")), GrowthClass::ToConst(1.0));
    }
}
