//! Text literals for the flux models.
//!
//! ```text
//! perm d=1 table={0:1,1:0}
//! shift excluded=finite{0,5}
//! shift excluded=periodic{N=3,p=3,r=0,tail=upper}
//! swap(0,1)*shift(0,1)
//! ```

use std::collections::BTreeMap;
use std::fmt;

use endcalc_core::flux::{EndPerm, FluxError, MultiEndPerm, ShiftSpec, Tail};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralError {
    pub message: String,
    pub offset: usize,
}

impl fmt::Display for LiteralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for LiteralError {}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.rest().is_empty()
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, LiteralError> {
        Err(LiteralError {
            message: message.into(),
            offset: self.pos,
        })
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), LiteralError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn word(&mut self) -> Result<&'a str, LiteralError> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        if len == 0 {
            return self.err("expected a name");
        }
        let w = &self.rest()[..len];
        self.pos += len;
        Ok(w)
    }

    fn int(&mut self) -> Result<i64, LiteralError> {
        self.skip_ws();
        let rest = self.rest();
        let sign = usize::from(rest.starts_with('-'));
        let digits = rest[sign..]
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len() - sign);
        if digits == 0 {
            return self.err("expected an integer");
        }
        let s = &rest[..sign + digits];
        match s.parse() {
            Ok(v) => {
                self.pos += s.len();
                Ok(v)
            }
            Err(_) => self.err("integer out of range"),
        }
    }

    fn int_list(&mut self, close: char) -> Result<Vec<i64>, LiteralError> {
        let mut out = Vec::new();
        self.skip_ws();
        if self.rest().starts_with(close) {
            return Ok(out);
        }
        loop {
            out.push(self.int()?);
            if !self.eat(",") {
                return Ok(out);
            }
        }
    }
}

fn flux_err(c: &Cursor<'_>, e: FluxError) -> LiteralError {
    LiteralError {
        message: e.to_string(),
        offset: c.pos,
    }
}

/// `[perm] [d=<int>] [table={i:j,...}]`
pub fn parse_perm(text: &str) -> Result<EndPerm, LiteralError> {
    let mut c = Cursor::new(text);
    c.eat("perm");
    let mut d = 0;
    let mut table = BTreeMap::new();
    while !c.at_end() {
        let key = c.word()?;
        c.expect("=")?;
        match key {
            "d" => d = c.int()?,
            "table" => {
                c.expect("{")?;
                c.skip_ws();
                if !c.rest().starts_with('}') {
                    loop {
                        let i = c.int()?;
                        c.expect(":")?;
                        let j = c.int()?;
                        if table.insert(i, j).is_some() {
                            return c.err(format!("index {i} given twice"));
                        }
                        if !c.eat(",") {
                            break;
                        }
                    }
                }
                c.expect("}")?;
            }
            other => return c.err(format!("unknown perm field `{other}`")),
        }
    }
    let radius = table.keys().map(|k: &i64| k.abs()).max().unwrap_or(0);
    EndPerm::new(d, radius, table).map_err(|e| flux_err(&c, e))
}

/// `[shift] excluded=finite{...}` or
/// `[shift] excluded=periodic{N=<int>,p=<int>,r=<ints>[,tail=upper|lower|both]}`
pub fn parse_shift(text: &str) -> Result<ShiftSpec, LiteralError> {
    let mut c = Cursor::new(text);
    c.eat("shift");
    c.expect("excluded")?;
    c.expect("=")?;
    let kind = c.word()?;
    c.expect("{")?;
    let spec = match kind {
        "finite" => {
            let list = c.int_list('}')?;
            ShiftSpec::finite(list)
        }
        "periodic" => {
            let (mut n, mut p, mut r, mut tail) = (None, None, Vec::new(), Tail::Upper);
            loop {
                let key = c.word()?;
                c.expect("=")?;
                match key {
                    "N" => n = Some(c.int()?),
                    "p" => p = Some(c.int()?),
                    "r" => {
                        r.push(c.int()?);
                        // further residues follow as bare integers
                        loop {
                            let save = c.pos;
                            if !c.eat(",") {
                                break;
                            }
                            match c.int() {
                                Ok(v) => r.push(v),
                                Err(_) => {
                                    c.pos = save;
                                    break;
                                }
                            }
                        }
                    }
                    "tail" => {
                        tail = match c.word()? {
                            "upper" => Tail::Upper,
                            "lower" => Tail::Lower,
                            "both" => Tail::Both,
                            other => return c.err(format!("unknown tail `{other}`")),
                        }
                    }
                    other => return c.err(format!("unknown periodic field `{other}`")),
                }
                if !c.eat(",") {
                    break;
                }
            }
            let (Some(n), Some(p)) = (n, p) else {
                return c.err("periodic needs both N and p");
            };
            ShiftSpec::periodic(n, p, r, tail).map_err(|e| flux_err(&c, e))?
        }
        other => return c.err(format!("unknown excluded kind `{other}`")),
    };
    c.expect("}")?;
    if !c.at_end() {
        return c.err("trailing input");
    }
    Ok(spec)
}

/// A product `w_1*w_2*...` of `swap(i,j)`, `shift(i,j)` and `id` on `n`
/// rays, composed so that `w_1` is applied last.
pub fn parse_word(text: &str, n: usize) -> Result<MultiEndPerm, LiteralError> {
    let mut c = Cursor::new(text);
    let mut f = MultiEndPerm::identity(n);
    loop {
        let name = c.word()?;
        let factor = match name {
            "id" => MultiEndPerm::identity(n),
            "swap" | "shift" => {
                c.expect("(")?;
                let i = c.int()?;
                c.expect(",")?;
                let j = c.int()?;
                c.expect(")")?;
                let in_range = |v: i64| v >= 0 && (v as usize) < n;
                if !in_range(i) || !in_range(j) || i == j {
                    return c.err(format!("rays must be distinct and below {n}"));
                }
                let (i, j) = (i as usize, j as usize);
                if name == "swap" {
                    MultiEndPerm::swap(n, i, j)
                } else {
                    MultiEndPerm::shift(n, i, j)
                }
            }
            other => return c.err(format!("unknown generator `{other}`")),
        };
        f = f.compose(&factor);
        if c.at_end() {
            return Ok(f);
        }
        c.expect("*")?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use endcalc_core::flux::{phi, CutPosition};

    #[test]
    fn perms() {
        let f = parse_perm("d=1").unwrap();
        assert_eq!(phi(&f, CutPosition(0)), 1);
        let f = parse_perm("perm d=0 table={0:1,1:0}").unwrap();
        assert_eq!(f, EndPerm::transposition(0, 1));
        assert_eq!(parse_perm(&f.to_string()).unwrap(), f);
        assert!(parse_perm("d=0 table={0:1}").is_err());
        assert!(parse_perm("e=0").is_err());
    }

    #[test]
    fn shifts() {
        let s = parse_shift("shift excluded=finite{0,5}").unwrap();
        assert_eq!(s, ShiftSpec::finite([0, 5]));
        let s = parse_shift("excluded=periodic{N=3,p=3,r=0}").unwrap();
        assert_eq!(s, ShiftSpec::periodic(3, 3, [0], Tail::Upper).unwrap());
        let s = parse_shift("excluded=periodic{N=1,p=5,r=1,3,tail=both}").unwrap();
        assert_eq!(s, ShiftSpec::periodic(1, 5, [1, 3], Tail::Both).unwrap());
        assert_eq!(parse_shift(&s.to_string()).unwrap(), s);
        assert!(parse_shift("excluded=periodic{N=1,p=2,r=0,1}").is_err());
    }

    #[test]
    fn words() {
        let tau = parse_word("swap(0,1)*shift(0,1)", 2).unwrap();
        let expected = MultiEndPerm::swap(2, 0, 1).compose(&MultiEndPerm::shift(2, 0, 1));
        assert_eq!(tau, expected);
        assert!(parse_word("swap(0,2)", 2).is_err());
    }
}
