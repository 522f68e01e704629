//! Suite text: one quasi-identity per line,
//! `label: premise ; premise => lhs = rhs | lhs = rhs  # anchor`.
//! Lines starting with `#` are comments. The label and the premises are optional.

use crate::error::{Error, Result};
use crate::qrst::Tag;

use super::ast::{Atom, BinOp, Constant, QuasiIdentity, Term, UnOp};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Eq,
    Arrow,
    Semi,
    Bar,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("{s:?}"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Eq => "'='".into(),
            Tok::Arrow => "'=>'".into(),
            Tok::Semi => "';'".into(),
            Tok::Bar => "'|'".into(),
        }
    }
}

struct LineParser {
    line: usize,
    /// Column (1-based, in chars) of each token, plus one past the end.
    toks: Vec<(usize, Tok)>,
    end: usize,
    at: usize,
}

fn lex(line: usize, text: &[char], offset: usize) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < text.len() {
        let col = offset + i + 1;
        let c = text[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '|' => Tok::Bar,
            '=' if text.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Arrow
            }
            '=' => Tok::Eq,
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < text.len() && (text[i].is_ascii_alphanumeric() || text[i] == '_' || text[i] == '\'') {
                    i += 1;
                }
                out.push((col, Tok::Ident(text[start..i].iter().collect())));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    column: col,
                    message: format!("unexpected character {other:?}"),
                })
            }
        };
        out.push((col, tok));
        i += 1;
    }
    Ok(out)
}

impl LineParser {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.peek() {
            Some(x) if *x == t => {
                self.at += 1;
                Ok(())
            }
            Some(x) => Err(self.err(format!("expected {}, found {}", t.describe(), x.describe()))),
            None => Err(self.err(format!("expected {}, found end of line", t.describe()))),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let name = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            Some(t) => return Err(self.err(format!("expected a term, found {}", t.describe()))),
            None => return Err(self.err("expected a term, found end of line")),
        };
        if name == "tau1" || name == "tau2" {
            return Err(self.err(format!("{name} is a type predicate, not a term")));
        }
        self.at += 1;
        if let Some(c) = Constant::parse(&name) {
            return Ok(Term::Const(c));
        }
        if let Some(op) = UnOp::parse(&name) {
            self.expect(Tok::LParen)?;
            let t = self.term()?;
            self.expect(Tok::RParen)?;
            return Ok(Term::un(op, t));
        }
        if let Some(op) = BinOp::parse(&name) {
            self.expect(Tok::LParen)?;
            let a = self.term()?;
            self.expect(Tok::Comma)?;
            let b = self.term()?;
            self.expect(Tok::RParen)?;
            return Ok(Term::bin(op, a, b));
        }
        if self.peek() == Some(&Tok::LParen) {
            self.at -= 1;
            return Err(self.err(format!("unknown operation {name:?}")));
        }
        Ok(Term::Var(name))
    }

    fn atom(&mut self) -> Result<Atom> {
        let tag = match self.peek() {
            Some(Tok::Ident(s)) if s == "tau1" => Some(Tag::Tau1),
            Some(Tok::Ident(s)) if s == "tau2" => Some(Tag::Tau2),
            _ => None,
        };
        if let Some(tag) = tag {
            self.at += 1;
            if self.peek() == Some(&Tok::LParen) {
                self.at += 1;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                return Ok(Atom::Tau(tag, t));
            }
            return Ok(Atom::Tau(tag, self.term()?));
        }
        let lhs = self.term()?;
        self.expect(Tok::Eq)?;
        let rhs = self.term()?;
        Ok(Atom::Eq(lhs, rhs))
    }

    fn body(&mut self) -> Result<(Vec<Atom>, Vec<Atom>)> {
        let has_arrow = self.toks.iter().any(|t| t.1 == Tok::Arrow);
        let mut premises = Vec::new();
        if has_arrow {
            if self.peek() != Some(&Tok::Arrow) {
                premises.push(self.atom()?);
                while self.peek() == Some(&Tok::Semi) {
                    self.at += 1;
                    premises.push(self.atom()?);
                }
            }
            self.expect(Tok::Arrow)?;
        }
        let mut conclusion = vec![self.atom()?];
        while self.peek() == Some(&Tok::Bar) {
            self.at += 1;
            conclusion.push(self.atom()?);
        }
        if let Some(t) = self.peek() {
            return Err(self.err(format!("unexpected {}", t.describe())));
        }
        Ok((premises, conclusion))
    }
}

/// Parses one non-comment line. `line` is used for labels and error positions.
pub fn parse_line(text: &str, line: usize) -> Result<QuasiIdentity> {
    let chars: Vec<char> = text.chars().collect();
    let hash = chars.iter().position(|&c| c == '#');
    let (body, anchor) = match hash {
        Some(h) => {
            let a: String = chars[h + 1..].iter().collect();
            let a = a.trim();
            (&chars[..h], (!a.is_empty()).then(|| a.to_string()))
        }
        None => (&chars[..], None),
    };
    let (label, offset) = match body.iter().position(|&c| c == ':') {
        Some(k) => {
            let l: String = body[..k].iter().collect();
            let l = l.trim().to_string();
            if l.is_empty() {
                return Err(Error::Syntax {
                    line,
                    column: k + 1,
                    message: "empty label".into(),
                });
            }
            (l, k + 1)
        }
        None => (format!("line {line}"), 0),
    };
    let toks = lex(line, &body[offset..], offset)?;
    let mut p = LineParser {
        line,
        toks,
        end: body.len() + 1,
        at: 0,
    };
    let (premises, conclusion) = p.body()?;
    Ok(QuasiIdentity {
        label,
        premises,
        conclusion,
        anchor,
    })
}

pub fn parse_suite(text: &str) -> Result<Vec<QuasiIdentity>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim_start();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(parse_line(line, i + 1)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::ast::print_suite;
    use proptest::prelude::*;

    #[test]
    fn parses_examples() {
        let q = parse_line("tau1 x ; tau1 y => join(x,y) = join(y,x)", 3).unwrap();
        assert_eq!(q.label, "line 3");
        assert_eq!(q.premises.len(), 2);
        assert_eq!(q.variables(), vec!["x", "y"]);
        let q = parse_line("qov-1b: tau2 x => join(snot(lup(x)), lup(x)) = one  # ∼𝔏x ⊕ 𝔏x = 1", 1).unwrap();
        assert_eq!(q.label, "qov-1b");
        assert_eq!(q.anchor.as_deref(), Some("∼𝔏x ⊕ 𝔏x = 1"));
        assert_eq!(
            q.conclusion,
            vec![Atom::Eq(
                Term::bin(
                    BinOp::Join,
                    Term::un(UnOp::Snot, Term::un(UnOp::Lup, Term::Var("x".into()))),
                    Term::un(UnOp::Lup, Term::Var("x".into()))
                ),
                Term::Const(Constant::One)
            )]
        );
        let q = parse_line("tau1 x => rnot(x) = rnot(x)", 1).unwrap();
        assert_eq!(q.premises, vec![Atom::Tau(Tag::Tau1, Term::Var("x".into()))]);
        let q = parse_line("t: tau1(x) ; meet(one, x) = y => tau2 y | y = x", 1).unwrap();
        assert_eq!(q.conclusion.len(), 2);
        let q = parse_line("qov-2a: snot(bot) = top", 1).unwrap();
        assert!(q.premises.is_empty() && q.variables().is_empty());
    }

    #[test]
    fn reports_positions() {
        let cases = [
            ("x = y @", 1, 7),
            ("tau1 x => join(x) = x", 1, 17),
            ("a: foo(x) = x", 1, 4),
            ("x = ", 1, 5),
            ("tau1 x => x = x x", 1, 17),
            (": x = x", 1, 1),
        ];
        for (text, line, column) in cases {
            match parse_line(text, line) {
                Err(Error::Syntax { line: l, column: c, .. }) => {
                    assert_eq!((l, c), (line, column), "{text}")
                }
                other => panic!("{text}: {other:?}"),
            }
        }
        match parse_suite("# header\n\nx = x\nx = = x\n") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (4, 5)),
            other => panic!("{other:?}"),
        }
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            prop::sample::select(vec!["x", "y", "z", "w1"]).prop_map(|v| Term::Var(v.into())),
            prop::sample::select(Constant::ALL.to_vec()).prop_map(Term::Const),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (prop::sample::select(UnOp::ALL.to_vec()), inner.clone()).prop_map(|(o, t)| Term::un(o, t)),
                (prop::sample::select(BinOp::ALL.to_vec()), inner.clone(), inner)
                    .prop_map(|(o, a, b)| Term::bin(o, a, b)),
            ]
        })
    }

    fn arb_atom() -> impl Strategy<Value = Atom> {
        prop_oneof![
            (prop::bool::ANY, arb_term())
                .prop_map(|(b, t)| Atom::Tau(if b { Tag::Tau1 } else { Tag::Tau2 }, t)),
            (arb_term(), arb_term()).prop_map(|(a, b)| Atom::Eq(a, b)),
        ]
    }

    fn arb_qi() -> impl Strategy<Value = QuasiIdentity> {
        (
            "[a-z][a-z0-9()-]{0,8}",
            prop::collection::vec(arb_atom(), 0..3),
            prop::collection::vec(arb_atom(), 1..3),
            prop::option::of("[^#\n]*[^#\n ]"),
        )
            .prop_map(|(label, premises, conclusion, anchor)| QuasiIdentity {
                label,
                premises,
                conclusion,
                anchor: anchor.map(|a| a.trim().to_string()).filter(|a| !a.is_empty()),
            })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(qs in prop::collection::vec(arb_qi(), 1..5)) {
            let text = print_suite(&qs);
            prop_assert_eq!(parse_suite(&text).unwrap(), qs);
        }
    }
}
