//! Recursive-descent parser for algebra expressions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | factor
//! factor  := primary ('^' integer)?
//! primary := symbol | integer | '(' expr ')' | 'inv' '(' expr ')'
//! ```
//!
//! `a/b` is `a·b⁻¹`. Symbols: `t x y z rho hbar h i g`. Products keep their written order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::aext::{AElem, SkewExpr};
use crate::error::{Error, Result};
use crate::scalars::{CenterFun, GaussRat};
use crate::upbw::Gen;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Symbol {
    T,
    X,
    Y,
    Z,
    Rho,
    Hbar,
    H,
    I,
    G,
}

impl Symbol {
    const NAMES: [(&'static str, Symbol); 9] = [
        ("t", Symbol::T),
        ("x", Symbol::X),
        ("y", Symbol::Y),
        ("z", Symbol::Z),
        ("rho", Symbol::Rho),
        ("hbar", Symbol::Hbar),
        ("h", Symbol::H),
        ("i", Symbol::I),
        ("g", Symbol::G),
    ];

    fn from_name(s: &str) -> Option<Symbol> {
        Symbol::NAMES.iter().find(|(n, _)| *n == s).map(|(_, v)| *v)
    }

    pub fn value(self) -> AElem {
        match self {
            Symbol::T => AElem::gen(Gen::T),
            Symbol::X => AElem::x(),
            Symbol::Y => AElem::y(),
            Symbol::Z => AElem::z(),
            Symbol::Rho => AElem::rho(),
            Symbol::Hbar => AElem::central(CenterFun::hbar()),
            Symbol::H => AElem::central(CenterFun::h()),
            Symbol::I => AElem::central(CenterFun::i()),
            Symbol::G => AElem::central(CenterFun::g()),
        }
    }
}

/// Expression tree; products keep their operand order.
#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Num(BigInt),
    Sym(Symbol),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Neg(Box<Ast>),
    Pow(Box<Ast>, u32),
    Inv(Box<Ast>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

struct Lexed {
    toks: Vec<(usize, Tok)>,
    end: usize,
}

fn parse_err(offset: usize, expected: &[&str]) -> Error {
    Error::Parse { offset, expected: expected.iter().map(|s| s.to_string()).collect() }
}

fn lex(src: &str) -> Result<Lexed> {
    let mut toks = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            toks.push((start, Tok::Num(src[start..i].parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            toks.push((start, Tok::Ident(src[start..i].to_string())));
        } else if b"+-*/^()".contains(&c) {
            toks.push((i, Tok::Op(c as char)));
            i += 1;
        } else {
            return Err(parse_err(i, &["symbol", "integer", "operator"]));
        }
    }
    Ok(Lexed { toks, end: src.len() })
}

struct Parser {
    lexed: Lexed,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.lexed.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.lexed.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.lexed.end)
    }

    fn eat_op(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_op(&mut self, c: char) -> Result<()> {
        if self.eat_op(c) {
            Ok(())
        } else {
            Err(parse_err(self.offset(), &[&c.to_string()]))
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            if self.eat_op('+') {
                lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat_op('-') {
                lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat_op('*') {
                lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat_op('/') {
                lhs = Ast::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        if self.eat_op('-') {
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Ast> {
        let base = self.primary()?;
        if !self.eat_op('^') {
            return Ok(base);
        }
        let off = self.offset();
        match self.peek() {
            Some(Tok::Num(n)) => {
                let e = u32::try_from(n).map_err(|_| parse_err(off, &["integer exponent"]))?;
                self.pos += 1;
                Ok(Ast::Pow(Box::new(base), e))
            }
            _ => Err(parse_err(off, &["nonnegative integer exponent"])),
        }
    }

    fn primary(&mut self) -> Result<Ast> {
        let off = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Ast::Num(n))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_op(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) if name == "inv" => {
                self.pos += 1;
                self.expect_op('(')?;
                let e = self.expr()?;
                self.expect_op(')')?;
                Ok(Ast::Inv(Box::new(e)))
            }
            Some(Tok::Ident(name)) => match Symbol::from_name(&name) {
                Some(s) => {
                    self.pos += 1;
                    Ok(Ast::Sym(s))
                }
                None => Err(parse_err(off, &["symbol", "integer", "(", "inv("])),
            },
            _ => Err(parse_err(off, &["symbol", "integer", "(", "inv("])),
        }
    }
}

/// Parse an expression.
pub fn parse(src: &str) -> Result<Ast> {
    let mut p = Parser { lexed: lex(src)?, pos: 0 };
    let e = p.expr()?;
    if p.pos < p.lexed.toks.len() {
        return Err(parse_err(p.offset(), &["+", "-", "*", "/", "end of input"]));
    }
    Ok(e)
}

impl Ast {
    /// Evaluate in the skew field; inverses are certified and central ones fold.
    pub fn eval(&self) -> Result<SkewExpr> {
        Ok(match self {
            Ast::Num(n) => {
                let q = GaussRat::new(BigRational::from_integer(n.clone()), BigRational::zero());
                SkewExpr::atom(AElem::central(CenterFun::constant(q)))
            }
            Ast::Sym(s) => SkewExpr::atom(s.value()),
            Ast::Add(a, b) => SkewExpr::sum(vec![a.eval()?, b.eval()?]),
            Ast::Sub(a, b) => SkewExpr::sum(vec![a.eval()?, negate(b.eval()?)]),
            Ast::Mul(a, b) => SkewExpr::prod(vec![a.eval()?, b.eval()?]),
            Ast::Div(a, b) => SkewExpr::prod(vec![a.eval()?, SkewExpr::inverse(b.eval()?)?]),
            Ast::Neg(a) => negate(a.eval()?),
            Ast::Pow(a, e) => {
                let base = a.eval()?;
                match base.as_aelem() {
                    Some(v) => SkewExpr::atom(v.pow(*e)),
                    None => SkewExpr::prod(vec![base; *e as usize]),
                }
            }
            Ast::Inv(a) => SkewExpr::inverse(a.eval()?)?,
        })
    }
}

fn negate(e: SkewExpr) -> SkewExpr {
    SkewExpr::prod(vec![SkewExpr::atom(AElem::int(-1)), e])
}

/// Parse and evaluate to an element of `A`, failing on noncentral inverses.
pub fn parse_aelem(src: &str) -> Result<AElem> {
    let e = parse(src)?.eval()?;
    e.as_aelem().ok_or_else(|| Error::Domain(format!("{e} is not an element of A")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_preserved() {
        let a = parse("y*z").unwrap();
        assert_eq!(a, Ast::Mul(Box::new(Ast::Sym(Symbol::Y)), Box::new(Ast::Sym(Symbol::Z))));
        assert_eq!(parse_aelem("y*z").unwrap(), &AElem::y() * &AElem::z());
        assert_ne!(parse_aelem("y*z").unwrap(), parse_aelem("z*y").unwrap());
    }

    #[test]
    fn negative_exponent_rejected() {
        match parse("rho^-1") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("x y"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(parse("(x"), Err(Error::Parse { offset: 2, .. })));
    }

    #[test]
    fn monopole_profile() {
        let f = parse_aelem("g*inv(rho*(rho^2-hbar^2))").unwrap();
        let expect = crate::ncmaxwell::monopole_profile(&CenterFun::g());
        assert_eq!(f.as_central(), Some(expect));
        assert_eq!(parse_aelem("h/2").unwrap(), AElem::central(CenterFun::i_hbar()));
        assert_eq!(parse_aelem("-x + 2*i").unwrap(), &-&AElem::x() + &AElem::central(CenterFun::i().scale(&GaussRat::from_int(2))));
    }

    #[test]
    fn noncentral_inverse() {
        let e = parse("inv(x)").unwrap().eval().unwrap();
        assert!(e.as_aelem().is_none());
        assert!(parse_aelem("inv(x)").is_err());
        assert!(parse("inv(x - x)").unwrap().eval().is_err());
    }
}
