//! Canonical text rendering of polynomials and rational functions, and the
//! expression parser that reads them back.

use super::{ExactError, Family, Poly, RatFun, Rational};

pub fn render_poly(p: &Poly, family: Family) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let mut t = String::new();
        if m.is_one() {
            t.push_str(&c.to_string());
        } else {
            if *c == -Rational::one() {
                t.push('-');
            } else if !c.is_one() {
                t.push_str(&format!("{c}*"));
            }
            let mut first = true;
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    t.push('*');
                }
                first = false;
                t.push_str(&format!("{}{}", family.letter(), i + 1));
                if e > 1 {
                    t.push_str(&format!("^{e}"));
                }
            }
        }
        if k > 0 && !t.starts_with('-') {
            out.push('+');
        }
        out.push_str(&t);
    }
    out
}

pub fn render_ratfun(f: &RatFun, family: Family) -> String {
    let num = f.num();
    if f.den_factors().is_empty() {
        return render_poly(num, family);
    }
    let den = f.den();
    let n = render_poly(num, family);
    let bare_num = num.len() == 1 && num.terms()[0].1.is_integer();
    let bare_den = den.len() == 1
        && den.terms()[0].1.is_one()
        && den.terms()[0].0.exps().iter().filter(|&&e| e > 0).count() == 1;
    let d = render_poly(&den, family);
    match (bare_num, bare_den) {
        (true, true) => format!("{n}/{d}"),
        (true, false) => format!("{n}/({d})"),
        (false, true) => format!("({n})/{d}"),
        (false, false) => format!("({n})/({d})"),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Var(u32),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, ExactError> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(s[start..i].parse()?)));
        } else if matches!(c, 'x' | 'u' | 'v') {
            let start = i;
            i += 1;
            let ds = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let idx: u32 = s[ds..i]
                .parse()
                .map_err(|_| ExactError::Parse(format!("bad variable at column {}", start + 1)))?;
            if idx == 0 {
                return Err(ExactError::Parse(format!(
                    "variable index must be positive at column {}",
                    start + 1
                )));
            }
            out.push((start, Tok::Var(idx)));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ExactError::Parse(format!(
                "unexpected character `{c}` at column {}",
                i + 1
            )));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |t| t.0) + 1
    }

    fn err(&self, what: &str) -> ExactError {
        ExactError::Parse(format!("{what} at column {}", self.col()))
    }

    fn expr(&mut self) -> Result<RatFun, ExactError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFun, ExactError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.unary()?;
            acc = if c == '*' { acc.mul(&t) } else { acc.div(&t)? };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFun, ExactError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFun, ExactError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) if n.is_integer() => {
                    self.pos += 1;
                    let e: u32 = n
                        .to_string()
                        .parse()
                        .map_err(|_| self.err("exponent too large"))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(self.err("expected integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFun, ExactError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RatFun::constant(n))
            }
            Some(Tok::Var(i)) => {
                self.pos += 1;
                Ok(RatFun::var(i))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(self.err("expected `)`")),
                }
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}

/// Parses an arithmetic expression in the variables `x_i`, `u_i`, `v_i`.
pub fn parse_ratfun(s: &str) -> Result<RatFun, ExactError> {
    let toks = tokenize(s)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: s.len(),
    };
    let r = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(r)
}

impl std::str::FromStr for RatFun {
    type Err = ExactError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ratfun(s)
    }
}
