use std::fmt;

/// Number of lagged inputs a program reads (`a..f`).
pub const INPUTS: usize = 6;

/// Functions of the shared function set. `+ - * /` are binary,
/// `sin cos sqrt` unary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Add,
    Sub,
    Mul,
    Div,
    Sin,
    Cos,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 7] = [Func::Add, Func::Sub, Func::Mul, Func::Div, Func::Sin, Func::Cos, Func::Sqrt];

    pub fn arity(self) -> usize {
        match self {
            Func::Add | Func::Sub | Func::Mul | Func::Div => 2,
            Func::Sin | Func::Cos | Func::Sqrt => 1,
        }
    }

    /// Genotype character: `+ - * /` and `S`, `C`, `q` for sin, cos, sqrt.
    pub fn code(self) -> char {
        match self {
            Func::Add => '+',
            Func::Sub => '-',
            Func::Mul => '*',
            Func::Div => '/',
            Func::Sin => 'S',
            Func::Cos => 'C',
            Func::Sqrt => 'q',
        }
    }

    pub fn from_code(c: char) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.code() == c)
    }

    #[inline]
    pub fn apply1(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Sqrt => x.sqrt(),
            _ => unreachable!("binary function applied to one argument"),
        }
    }

    #[inline]
    pub fn apply2(self, x: f64, y: f64) -> f64 {
        match self {
            Func::Add => x + y,
            Func::Sub => x - y,
            Func::Mul => x * y,
            Func::Div => x / y,
            _ => unreachable!("unary function applied to two arguments"),
        }
    }
}

/// A symbol of a normal gene's head or tail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Func(Func),
    /// Lagged input `a..f`; `Var(0)` is the oldest lag.
    Var(u8),
    /// Random numerical constant placeholder `?`.
    Const,
}

impl Symbol {
    pub fn arity(self) -> usize {
        match self {
            Symbol::Func(f) => f.arity(),
            _ => 0,
        }
    }

    pub fn is_terminal(self) -> bool {
        !matches!(self, Symbol::Func(_))
    }

    pub fn code(self) -> char {
        match self {
            Symbol::Func(f) => f.code(),
            Symbol::Var(i) => (b'a' + i) as char,
            Symbol::Const => '?',
        }
    }

    pub fn from_code(c: char) -> Option<Symbol> {
        match c {
            '?' => Some(Symbol::Const),
            'a'..='f' => Some(Symbol::Var(c as u8 - b'a')),
            _ => Func::from_code(c).map(Symbol::Func),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// A symbol of the homeotic (linking) gene.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LinkSymbol {
    Func(Func),
    /// Reference to normal gene `i`.
    Gene(u8),
}

impl LinkSymbol {
    pub fn arity(self) -> usize {
        match self {
            LinkSymbol::Func(f) => f.arity(),
            LinkSymbol::Gene(_) => 0,
        }
    }

    pub fn is_terminal(self) -> bool {
        matches!(self, LinkSymbol::Gene(_))
    }

    pub fn code(self) -> char {
        match self {
            LinkSymbol::Func(f) => f.code(),
            LinkSymbol::Gene(i) => (b'0' + i) as char,
        }
    }

    pub fn from_code(c: char) -> Option<LinkSymbol> {
        match c {
            '0'..='9' => Some(LinkSymbol::Gene(c as u8 - b'0')),
            _ => Func::from_code(c).map(LinkSymbol::Func),
        }
    }
}

/// Dc-domain letter for constant slot `i` (`A` for slot 0).
pub fn dc_code(slot: u8) -> char {
    (b'A' + slot) as char
}

pub fn dc_from_code(c: char) -> Option<u8> {
    c.is_ascii_uppercase().then(|| c as u8 - b'A')
}
