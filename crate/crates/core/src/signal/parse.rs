//! Recursive-descent parser for signal expressions.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ['^' nat]
//! atom     := rational | 'i' | 't' | '(' expr ')' | '-' atom | fn '(' expr ')'
//! fn       := 'exp' | 'sin' | 'cos'
//! rational := int ['/' nat]
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Expr, SignalError};
use crate::arith::GaussianRational;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(text: &str) -> Result<Lexer, SignalError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            toks.push((Tok::Num(text[s..i].parse().expect("digits")), s));
        } else if c.is_ascii_alphabetic() {
            let s = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            toks.push((Tok::Ident(text[s..i].to_string()), s));
        } else if b"+-*/^()".contains(&c) {
            toks.push((Tok::Sym(c as char), i));
            i += 1;
        } else {
            return Err(SignalError::Syntax {
                offset: i,
                message: format!("unexpected character {:?}", text[i..].chars().next().unwrap()),
            });
        }
    }
    toks.push((Tok::End, text.len()));
    Ok(Lexer { toks })
}

struct Parser {
    lex: Lexer,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.lex.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.lex.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.lex.toks[self.pos].0.clone();
        if self.pos + 1 < self.lex.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, SignalError> {
        Err(SignalError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<(), SignalError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<Expr, SignalError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    let r = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(r));
                }
                Tok::Sym('-') => {
                    self.bump();
                    let r = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(Expr::Neg(Box::new(r))));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SignalError> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Sym('*') {
            self.bump();
            let r = self.factor()?;
            lhs = Expr::Mul(Box::new(lhs), Box::new(r));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, SignalError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        match self.peek().clone() {
            Tok::Num(n) => match u32::try_from(&n) {
                Ok(k) => {
                    self.bump();
                    Ok(Expr::Pow(Box::new(base), k))
                }
                Err(_) => self.err("exponent too large"),
            },
            _ => self.err("expected a natural-number exponent"),
        }
    }

    fn atom(&mut self) -> Result<Expr, SignalError> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(n) => {
                if *self.peek() == Tok::Sym('/') {
                    self.bump();
                    match self.bump() {
                        Tok::Num(d) if !d.is_zero() => {
                            Ok(Expr::Const(GaussianRational::from_real(BigRational::new(n, d))))
                        }
                        Tok::Num(_) => Err(SignalError::Syntax {
                            offset: at,
                            message: "zero denominator".into(),
                        }),
                        _ => {
                            self.pos -= 1;
                            self.err("expected a denominator")
                        }
                    }
                } else {
                    Ok(Expr::Const(GaussianRational::from_real(BigRational::from_integer(n))))
                }
            }
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym('-') => Ok(Expr::Neg(Box::new(self.atom()?))),
            Tok::Ident(name) => match name.as_str() {
                "t" => Ok(Expr::Time),
                "i" => Ok(Expr::Const(GaussianRational::i())),
                "exp" | "sin" | "cos" => {
                    self.expect('(')?;
                    let e = Box::new(self.expr()?);
                    self.expect(')')?;
                    Ok(match name.as_str() {
                        "exp" => Expr::Exp(e),
                        "sin" => Expr::Sin(e),
                        _ => Expr::Cos(e),
                    })
                }
                _ if *self.peek() == Tok::Sym('(') => Err(SignalError::UnknownFunction { name, offset: at }),
                _ => Err(SignalError::Syntax {
                    offset: at,
                    message: format!("unknown identifier '{name}'"),
                }),
            },
            Tok::End => Err(SignalError::Syntax {
                offset: at,
                message: "unexpected end of input".into(),
            }),
            Tok::Sym(c) => Err(SignalError::Syntax {
                offset: at,
                message: format!("unexpected '{c}'"),
            }),
        }
    }
}

/// Parse a signal expression.
pub fn parse_signal(text: &str) -> Result<Expr, SignalError> {
    let mut p = Parser { lex: lex(text)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Expr::*;

    fn b(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    #[test]
    fn basic_trees() {
        let e = parse_signal("exp(-t)*sin(3*t)").unwrap();
        assert_eq!(e, Mul(b(Exp(b(Neg(b(Time))))), b(Sin(b(Mul(b(Expr::int(3)), b(Time)))))));
        let e = parse_signal("1/2 + t^2").unwrap();
        assert_eq!(e, Add(b(Const(GaussianRational::ratio(1, 2))), b(Pow(b(Time), 2))));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_signal("t^(-1)"), Err(SignalError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_signal("tan(t)"), Err(SignalError::UnknownFunction { offset: 0, .. })));
        assert!(matches!(parse_signal("1 +"), Err(SignalError::Syntax { offset: 3, .. })));
        assert!(matches!(parse_signal("1/0"), Err(SignalError::Syntax { .. })));
        assert!(matches!(parse_signal("t t"), Err(SignalError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_signal("2.5"), Err(SignalError::Syntax { offset: 1, .. })));
    }

    #[test]
    fn unary_minus_binds_tighter_than_pow() {
        assert_eq!(parse_signal("-t^2").unwrap(), Pow(b(Neg(b(Time))), 2));
    }

    #[test]
    fn round_trip() {
        for s in [
            "exp(-t)*sin(3*t)",
            "1/2 + t^2",
            "-t^2 - (t + 1)^3*cos(2/3*t)",
            "1 - (2 - t) - -t",
            "i*t + exp(i*t)",
            "((t))*(t*t)",
            "-(t^2)",
            "3 + (t + 1)",
        ] {
            let e = parse_signal(s).unwrap();
            let printed = e.to_string();
            assert_eq!(parse_signal(&printed).unwrap(), e, "{s} -> {printed}");
        }
    }
}
