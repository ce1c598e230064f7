//! Text descriptions of valuation laws.
//!
//! ```text
//! expr    := family | mix
//! family  := NAME "(" [param ("," param)*] ")"
//! param   := NAME "=" (NUMBER | STRING)
//! mix     := "mix" "(" term ("," term)* ")"
//! term    := NUMBER "*" expr
//! ```
//!
//! Families: `pointmass(v)`, `uniform(a, b)`, `exponential(rate)`,
//! `pareto(alpha, scale)`, `lognormal(mu, sigma)`, `equalrev(c)` and
//! `empirical(file="path")`. Whitespace is ignored outside string literals.

use std::fmt;
use std::sync::Arc;

use crate::dist::{
    Distribution, Empirical, EqualRevenue, Exponential, LogNormal, Mixture, Pareto, PointMass,
    Uniform,
};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    PointMass { v: f64 },
    Uniform { a: f64, b: f64 },
    Exponential { rate: f64 },
    Pareto { alpha: f64, scale: f64 },
    LogNormal { mu: f64, sigma: f64 },
    EqualRevenue { c: f64 },
    Empirical { file: String },
}

#[derive(Debug, Clone, PartialEq)]
pub enum DistributionSpec {
    Family(FamilySpec),
    /// Raw (unnormalized) positive weights.
    Mixture(Vec<(f64, DistributionSpec)>),
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::PointMass { .. } => "pointmass",
            FamilySpec::Uniform { .. } => "uniform",
            FamilySpec::Exponential { .. } => "exponential",
            FamilySpec::Pareto { .. } => "pareto",
            FamilySpec::LogNormal { .. } => "lognormal",
            FamilySpec::EqualRevenue { .. } => "equalrev",
            FamilySpec::Empirical { .. } => "empirical",
        }
    }

    /// Checks parameter domains; `offset` is reported in the error.
    fn validate(&self, offset: usize) -> Result<()> {
        let fail = |param: &str, reason: &str| {
            Err(Error::Parameter {
                family: self.name().to_owned(),
                param: param.to_owned(),
                offset,
                reason: reason.to_owned(),
            })
        };
        let positive = |x: f64| x > 0.0 && x.is_finite();
        match *self {
            FamilySpec::PointMass { v } if !positive(v) => fail("v", "must be positive"),
            FamilySpec::Uniform { a, .. } if !(a >= 0.0 && a.is_finite()) => {
                fail("a", "must be nonnegative")
            }
            FamilySpec::Uniform { a, b } if !(b > a && b.is_finite()) => {
                fail("b", "must exceed a")
            }
            FamilySpec::Exponential { rate } if !positive(rate) => {
                fail("rate", "must be positive")
            }
            FamilySpec::Pareto { alpha, .. } if !positive(alpha) => {
                fail("alpha", "must be positive")
            }
            FamilySpec::Pareto { scale, .. } if !positive(scale) => {
                fail("scale", "must be positive")
            }
            FamilySpec::LogNormal { mu, .. } if !mu.is_finite() => fail("mu", "must be finite"),
            FamilySpec::LogNormal { sigma, .. } if !positive(sigma) => {
                fail("sigma", "must be positive")
            }
            FamilySpec::EqualRevenue { c } if !positive(c) => fail("c", "must be positive"),
            FamilySpec::Empirical { ref file } if file.is_empty() => {
                fail("file", "must not be empty")
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::PointMass { v } => write!(f, "pointmass(v={v})"),
            FamilySpec::Uniform { a, b } => write!(f, "uniform(a={a}, b={b})"),
            FamilySpec::Exponential { rate } => write!(f, "exponential(rate={rate})"),
            FamilySpec::Pareto { alpha, scale } => {
                write!(f, "pareto(alpha={alpha}, scale={scale})")
            }
            FamilySpec::LogNormal { mu, sigma } => write!(f, "lognormal(mu={mu}, sigma={sigma})"),
            FamilySpec::EqualRevenue { c } => write!(f, "equalrev(c={c})"),
            FamilySpec::Empirical { file } => write!(f, "empirical(file=\"{file}\")"),
        }
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistributionSpec::Family(fam) => fam.fmt(f),
            DistributionSpec::Mixture(parts) => {
                f.write_str("mix(")?;
                for (i, (w, e)) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{w}*{e}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl std::str::FromStr for DistributionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_spec(s)
    }
}

pub fn parse_spec(text: &str) -> Result<DistributionSpec> {
    let mut p = Parser { src: text, pos: 0 };
    p.skip_ws();
    if p.pos == text.len() {
        return Err(p.syntax("empty distribution description"));
    }
    let spec = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(spec)
}

/// Builds the described law. Empirical file paths are resolved relative to
/// the current directory.
pub fn build(spec: &DistributionSpec) -> Result<Arc<dyn Distribution>> {
    Ok(match spec {
        DistributionSpec::Family(fam) => {
            fam.validate(0)?;
            match fam {
                FamilySpec::PointMass { v } => Arc::new(PointMass::new(*v)),
                FamilySpec::Uniform { a, b } => Arc::new(Uniform::new(*a, *b)),
                FamilySpec::Exponential { rate } => Arc::new(Exponential::new(*rate)),
                FamilySpec::Pareto { alpha, scale } => Arc::new(Pareto::new(*alpha, *scale)),
                FamilySpec::LogNormal { mu, sigma } => Arc::new(LogNormal::new(*mu, *sigma)),
                FamilySpec::EqualRevenue { c } => Arc::new(EqualRevenue::new(*c)),
                FamilySpec::Empirical { file } => Arc::new(Empirical::from_file(file)?),
            }
        }
        DistributionSpec::Mixture(parts) => {
            if parts.is_empty() {
                return Err(Error::InvalidArgument("mixture has no components".into()));
            }
            let mut built = Vec::with_capacity(parts.len());
            for (w, e) in parts {
                if !(*w > 0.0 && w.is_finite()) {
                    return Err(Error::NonPositiveWeight {
                        offset: 0,
                        weight: *w,
                    });
                }
                built.push((*w, build(e)?));
            }
            Arc::new(Mixture::new(built))
        }
    })
}

pub fn parse_and_build(text: &str) -> Result<Arc<dyn Distribution>> {
    build(&parse_spec(text)?)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn syntax(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_owned(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, ch: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&format!("expected `{}`", ch as char)))
        }
    }

    fn ident(&mut self) -> Result<(usize, &str)> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric() || b == b'_') {
            self.pos += 1;
        }
        if start == self.pos || self.src.as_bytes()[start].is_ascii_digit() {
            self.pos = start;
            return Err(self.syntax("expected a name"));
        }
        Ok((start, &self.src[start..self.pos]))
    }

    fn number(&mut self) -> Result<(usize, f64)> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut i = self.pos;
        if matches!(bytes.get(i), Some(b'+' | b'-')) {
            i += 1;
        }
        let digits_from = i;
        while matches!(bytes.get(i), Some(b) if b.is_ascii_digit()) {
            i += 1;
        }
        let mut had_digits = i > digits_from;
        if bytes.get(i) == Some(&b'.') {
            i += 1;
            let frac = i;
            while matches!(bytes.get(i), Some(b) if b.is_ascii_digit()) {
                i += 1;
            }
            had_digits |= i > frac;
        }
        if !had_digits {
            return Err(self.syntax("expected a number"));
        }
        if matches!(bytes.get(i), Some(b'e' | b'E')) {
            let mut j = i + 1;
            if matches!(bytes.get(j), Some(b'+' | b'-')) {
                j += 1;
            }
            let exp_digits = j;
            while matches!(bytes.get(j), Some(b) if b.is_ascii_digit()) {
                j += 1;
            }
            if j > exp_digits {
                i = j;
            }
        }
        let value = self.src[start..i]
            .parse::<f64>()
            .map_err(|_| self.syntax("malformed number"))?;
        self.pos = i;
        Ok((start, value))
    }

    fn string(&mut self) -> Result<String> {
        self.skip_ws();
        if self.peek() != Some(b'"') {
            return Err(self.syntax("expected a quoted string"));
        }
        let start = self.pos + 1;
        match self.src[start..].find('"') {
            Some(len) => {
                self.pos = start + len + 1;
                Ok(self.src[start..start + len].to_owned())
            }
            None => Err(self.syntax("unterminated string")),
        }
    }

    fn expr(&mut self) -> Result<DistributionSpec> {
        let (name_at, name) = self.ident()?;
        let name = name.to_owned();
        self.expect(b'(')?;
        if name == "mix" {
            return self.mixture_body();
        }
        let params = self.params()?;
        self.expect(b')')?;
        let family = family_from_params(&name, name_at, params)?;
        family.validate(name_at)?;
        Ok(DistributionSpec::Family(family))
    }

    fn mixture_body(&mut self) -> Result<DistributionSpec> {
        let mut parts = Vec::new();
        loop {
            let (at, w) = self.number()?;
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::NonPositiveWeight {
                    offset: at,
                    weight: w,
                });
            }
            self.expect(b'*')?;
            parts.push((w, self.expr()?));
            self.skip_ws();
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b')') => {
                    self.pos += 1;
                    return Ok(DistributionSpec::Mixture(parts));
                }
                _ => return Err(self.syntax("expected `,` or `)` in mixture")),
            }
        }
    }

    fn params(&mut self) -> Result<Vec<Param>> {
        let mut out = Vec::new();
        self.skip_ws();
        if self.peek() == Some(b')') {
            return Ok(out);
        }
        loop {
            let (at, key) = self.ident()?;
            let key = key.to_owned();
            self.expect(b'=')?;
            self.skip_ws();
            let value = if self.peek() == Some(b'"') {
                ParamValue::Text(self.string()?)
            } else {
                ParamValue::Number(self.number()?.1)
            };
            if out.iter().any(|p: &Param| p.key == key) {
                return Err(Error::Syntax {
                    offset: at,
                    message: format!("duplicate parameter `{key}`"),
                });
            }
            out.push(Param { key, at, value });
            self.skip_ws();
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b')') => return Ok(out),
                _ => return Err(self.syntax("expected `,` or `)` after parameter")),
            }
        }
    }
}

enum ParamValue {
    Number(f64),
    Text(String),
}

struct Param {
    key: String,
    at: usize,
    value: ParamValue,
}

fn family_from_params(name: &str, at: usize, params: Vec<Param>) -> Result<FamilySpec> {
    let expected: &[&str] = match name {
        "pointmass" => &["v"],
        "uniform" => &["a", "b"],
        "exponential" => &["rate"],
        "pareto" => &["alpha", "scale"],
        "lognormal" => &["mu", "sigma"],
        "equalrev" => &["c"],
        "empirical" => &["file"],
        _ => {
            return Err(Error::UnknownFamily {
                name: name.to_owned(),
                offset: at,
            })
        }
    };
    let param_err = |param: &str, offset: usize, reason: &str| Error::Parameter {
        family: name.to_owned(),
        param: param.to_owned(),
        offset,
        reason: reason.to_owned(),
    };
    if let Some(p) = params.iter().find(|p| !expected.contains(&p.key.as_str())) {
        return Err(param_err(&p.key, p.at, "unknown parameter"));
    }
    let num = |key: &str| -> Result<f64> {
        match params.iter().find(|p| p.key == key) {
            Some(Param {
                value: ParamValue::Number(x),
                ..
            }) => Ok(*x),
            Some(p) => Err(param_err(key, p.at, "expected a number")),
            None => Err(param_err(key, at, "missing")),
        }
    };
    Ok(match name {
        "pointmass" => FamilySpec::PointMass { v: num("v")? },
        "uniform" => FamilySpec::Uniform {
            a: num("a")?,
            b: num("b")?,
        },
        "exponential" => FamilySpec::Exponential { rate: num("rate")? },
        "pareto" => FamilySpec::Pareto {
            alpha: num("alpha")?,
            scale: num("scale")?,
        },
        "lognormal" => FamilySpec::LogNormal {
            mu: num("mu")?,
            sigma: num("sigma")?,
        },
        "equalrev" => FamilySpec::EqualRevenue { c: num("c")? },
        _ => match params.iter().find(|p| p.key == "file") {
            Some(Param {
                value: ParamValue::Text(file),
                ..
            }) => FamilySpec::Empirical { file: file.clone() },
            Some(p) => return Err(param_err("file", p.at, "expected a quoted path")),
            None => return Err(param_err("file", at, "missing")),
        },
    })
}
