//! Text syntax for polynomials: sums of terms `c*T^k`.

use super::fq::{Fe, Fq};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Canonical form: descending degree, no spaces, unit coefficients omitted.
pub fn format_poly(f: &Poly, fq: &Fq) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut terms = Vec::new();
    for (k, &c) in f.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let var = match k {
            0 => String::new(),
            1 => "T".to_string(),
            _ => format!("T^{k}"),
        };
        terms.push(match (k, c == Fe::ONE) {
            (0, _) => fq.fmt_elem(c),
            (_, true) => var,
            _ => format!("{}*{var}", fq.fmt_elem(c)),
        });
    }
    terms.join("+")
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    fq: &'a Fq,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!(
            "{msg} at position {} in `{}`",
            self.pos,
            String::from_utf8_lossy(self.s)
        )))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().or_else(|_| self.err("number too large"))
    }

    fn coefficient(&mut self) -> Result<Option<Fe>> {
        match self.peek() {
            Some(b'[') => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos] != b']' {
                    self.pos += 1;
                }
                if self.pos == self.s.len() {
                    return self.err("unterminated `[`");
                }
                self.pos += 1;
                let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                Ok(Some(self.fq.parse_elem(text)?))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                Ok(Some(self.fq.from_i64((n % self.fq.p() as u64) as i64)))
            }
            _ => Ok(None),
        }
    }

    fn term(&mut self) -> Result<(Fe, usize)> {
        let c = self.coefficient()?;
        if c.is_some() {
            self.eat(b'*');
        }
        if self.eat(b'T') || self.eat(b't') {
            let k = if self.eat(b'^') { self.uint()? as usize } else { 1 };
            if k > 1 << 20 {
                return self.err("exponent too large");
            }
            Ok((c.unwrap_or(Fe::ONE), k))
        } else {
            match c {
                Some(c) => Ok((c, 0)),
                None => self.err("expected a term"),
            }
        }
    }
}

/// Parses e.g. `T^2+2*T+3`, `2T - 1`, `[1,2]*T^3`. Terms may come in any order
/// and may repeat; integer coefficients are reduced mod p.
pub fn parse_poly(s: &str, fq: &Fq) -> Result<Poly> {
    let mut p = Parser { s: s.as_bytes(), pos: 0, fq };
    if p.peek().is_none() {
        return p.err("empty polynomial");
    }
    let mut acc: Vec<Fe> = Vec::new();
    let mut first = true;
    loop {
        let neg = if p.eat(b'-') {
            true
        } else if p.eat(b'+') || first {
            false
        } else if p.peek().is_none() {
            break;
        } else {
            return p.err("expected `+` or `-`");
        };
        first = false;
        let (c, k) = p.term()?;
        let c = if neg { fq.neg(c) } else { c };
        if acc.len() <= k {
            acc.resize(k + 1, Fe::ZERO);
        }
        acc[k] = fq.add(acc[k], c);
    }
    Ok(Poly::from_coeffs(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_parse() {
        let f5 = Fq::prime(5).unwrap();
        let f = Poly::from_ints(&f5, &[3, 2, 1]);
        assert_eq!(format_poly(&f, &f5), "T^2+2*T+3");
        for s in ["T^2+2*T+3", "3 + 2T + T^2", "2*T^1+T^2+3", "T^2-3T-2", "T^2+T+T+8"] {
            assert_eq!(parse_poly(s, &f5).unwrap(), f, "{s}");
        }
        assert_eq!(parse_poly("0", &f5).unwrap(), Poly::zero());
        assert_eq!(format_poly(&Poly::zero(), &f5), "0");
        assert_eq!(format_poly(&Poly::t(), &f5), "T");
        assert_eq!(parse_poly("-T", &f5).unwrap(), Poly::from_ints(&f5, &[0, 4]));
    }

    #[test]
    fn rejects_garbage() {
        let f3 = Fq::prime(3).unwrap();
        for s in ["", "T^", "T+*2", "x", "T T", "2**T", "[1,2"] {
            assert!(parse_poly(s, &f3).is_err(), "{s}");
        }
    }

    #[test]
    fn extension_field_coefficients() {
        let f9 = Fq::from_q(9).unwrap();
        let a = f9.from_coords(&[1, 2]).unwrap();
        let f = Poly::from_coeffs(vec![a, Fe::ZERO, a]);
        let s = format_poly(&f, &f9);
        assert_eq!(s, "[1,2]*T^2+[1,2]");
        assert_eq!(parse_poly(&s, &f9).unwrap(), f);
        assert_eq!(parse_poly("[1,2] T^2 + [1,2]", &f9).unwrap(), f);
    }
}
