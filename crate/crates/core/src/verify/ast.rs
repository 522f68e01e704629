use std::fmt;

use crate::qrst::Tag;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Constant {
    Bot,
    Top,
    Zero,
    One,
}

impl Constant {
    pub const ALL: [Constant; 4] = [Constant::Bot, Constant::Top, Constant::Zero, Constant::One];

    pub fn name(self) -> &'static str {
        match self {
            Constant::Bot => "bot",
            Constant::Top => "top",
            Constant::Zero => "zero",
            Constant::One => "one",
        }
    }

    pub fn parse(s: &str) -> Option<Constant> {
        Constant::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnOp {
    Lup,
    Bup,
    Snot,
    Rnot,
}

impl UnOp {
    pub const ALL: [UnOp; 4] = [UnOp::Lup, UnOp::Bup, UnOp::Snot, UnOp::Rnot];

    pub fn name(self) -> &'static str {
        match self {
            UnOp::Lup => "lup",
            UnOp::Bup => "bup",
            UnOp::Snot => "snot",
            UnOp::Rnot => "rnot",
        }
    }

    pub fn parse(s: &str) -> Option<UnOp> {
        UnOp::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Join,
    Meet,
    Rimp,
    Rimpb,
}

impl BinOp {
    pub const ALL: [BinOp; 4] = [BinOp::Join, BinOp::Meet, BinOp::Rimp, BinOp::Rimpb];

    pub fn name(self) -> &'static str {
        match self {
            BinOp::Join => "join",
            BinOp::Meet => "meet",
            BinOp::Rimp => "rimp",
            BinOp::Rimpb => "rimpb",
        }
    }

    pub fn parse(s: &str) -> Option<BinOp> {
        BinOp::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// Term over the hybrid signature.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(Constant),
    Unary(UnOp, Box<Term>),
    Binary(BinOp, Box<Term>, Box<Term>),
}

impl Term {
    pub fn un(op: UnOp, t: Term) -> Term {
        Term::Unary(op, Box::new(t))
    }

    pub fn bin(op: BinOp, a: Term, b: Term) -> Term {
        Term::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            Term::Const(_) => {}
            Term::Unary(_, t) => t.collect_vars(out),
            Term::Binary(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => f.write_str(c.name()),
            Term::Unary(op, t) => write!(f, "{}({t})", op.name()),
            Term::Binary(op, a, b) => write!(f, "{}({a}, {b})", op.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Tau(Tag, Term),
    Eq(Term, Term),
}

impl Atom {
    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Atom::Tau(_, t) => t.collect_vars(out),
            Atom::Eq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Tau(Tag::Tau1, t) => write!(f, "tau1 {t}"),
            Atom::Tau(Tag::Tau2, t) => write!(f, "tau2 {t}"),
            Atom::Eq(a, b) => write!(f, "{a} = {b}"),
        }
    }
}

/// `premises => conclusion`; the conclusion is a disjunction of atoms.
/// Variables not typed by a premise range over the whole carrier.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiIdentity {
    pub label: String,
    pub premises: Vec<Atom>,
    pub conclusion: Vec<Atom>,
    pub anchor: Option<String>,
}

impl QuasiIdentity {
    /// Variables in order of first occurrence, premises first.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        for a in self.premises.iter().chain(&self.conclusion) {
            a.collect_vars(&mut out);
        }
        out
    }
}

impl fmt::Display for QuasiIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.label)?;
        if !self.premises.is_empty() {
            for (i, p) in self.premises.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ; ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(" => ")?;
        }
        for (i, c) in self.conclusion.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{c}")?;
        }
        if let Some(a) = &self.anchor {
            write!(f, "  # {a}")?;
        }
        Ok(())
    }
}

pub fn print_suite(qs: &[QuasiIdentity]) -> String {
    qs.iter().map(|q| format!("{q}\n")).collect()
}
