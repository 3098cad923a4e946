//! Dart and payoff expressions.
//!
//! ```text
//! dart   := normal(m,s) | uniform(lo,hi) | cauchy(l,s) | bern(p)
//!         | atomic((x,m);(x,m);…) | atomic(((x,y),m);…)
//!         | semicircle | arcsine | tentcf | cantor | grid(k) | disc
//!         | mix(w:dart, …) | sum(c:dart, …) | affine(a,b,dart) | affine(a,(bx,by),dart)
//! payoff := cos | cos(w1,w2) | squarewave | comb(k,mmax) | dartboard | kdelta(d,p)
//!         | zeroconstruct(dart) | singularatom(x,p) | truncate(B,payoff)
//!         | gaussbump(c,w) | gaussbump((cx,cy),w) | pointstep(v,r,o)
//!         | pwl((x,y);(x,y);…) | slice(payoff,(ux,uy))
//! ```
//!
//! Whitespace is ignored and numbers are plain decimals. `,` and `;` both
//! separate arguments.

use std::fmt;

use darts_core::payoff::{make_comb, make_zero_construct, truncate};
use darts_core::{BoardGeometry, Dart, DartError, Payoff, PayoffError, Point};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Dart(#[from] DartError),
    #[error(transparent)]
    Payoff(#[from] PayoffError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    Tuple(Vec<Node>),
    Call { name: String, args: Vec<Node> },
    Weighted(f64, Box<Node>),
}

fn uses_semicolons(name: &str) -> bool {
    matches!(name, "atomic" | "pwl")
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Num(x) => write!(f, "{x}"),
            Node::Tuple(items) => {
                f.write_str("(")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{it}")?;
                }
                f.write_str(")")
            }
            Node::Call { name, args } => {
                f.write_str(name)?;
                if args.is_empty() {
                    return Ok(());
                }
                let sep = if uses_semicolons(name) { ";" } else { "," };
                f.write_str("(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Node::Weighted(w, inner) => write!(f, "{w}:{inner}"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn number(&mut self) -> Result<f64, ExprError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
            self.pos += 1;
        }
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let int = digits(self);
        let mut frac = 0;
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            frac = digits(self);
        }
        if int + frac == 0 {
            self.pos = start;
            return self.err("expected a number");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse().map_err(|_| ExprError::Syntax { pos: start, msg: format!("bad number `{text}`") })
    }

    fn ident(&mut self) -> Result<String, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a name");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii").to_ascii_lowercase())
    }

    fn call(&mut self) -> Result<Node, ExprError> {
        let name = self.ident()?;
        let mut args = Vec::new();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            if self.peek() != Some(b')') {
                loop {
                    args.push(self.arg()?);
                    match self.peek() {
                        Some(b',' | b';') => self.pos += 1,
                        _ => break,
                    }
                }
            }
            self.expect(b')')?;
        }
        Ok(Node::Call { name, args })
    }

    fn arg(&mut self) -> Result<Node, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let mut items = vec![self.arg()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    items.push(self.arg()?);
                }
                self.expect(b')')?;
                Ok(Node::Tuple(items))
            }
            Some(c) if c.is_ascii_digit() || c == b'-' || c == b'+' || c == b'.' => {
                let x = self.number()?;
                if self.peek() == Some(b':') {
                    self.pos += 1;
                    Ok(Node::Weighted(x, Box::new(self.call()?)))
                } else {
                    Ok(Node::Num(x))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => self.call(),
            Some(c) => self.err(format!("unexpected `{}`", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses the generic expression tree.
pub fn parse_node(text: &str) -> Result<Node, ExprError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let node = p.call()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(node)
}

fn shape<T>(msg: impl Into<String>) -> Result<T, ExprError> {
    Err(ExprError::Shape(msg.into()))
}

fn num(n: &Node, what: &str) -> Result<f64, ExprError> {
    match n {
        Node::Num(x) => Ok(*x),
        _ => shape(format!("{what}: expected a number, found `{n}`")),
    }
}

fn count(n: &Node, what: &str) -> Result<u32, ExprError> {
    let x = num(n, what)?;
    if x < 0.0 || x.fract() != 0.0 || x > u32::MAX as f64 {
        return shape(format!("{what}: expected a whole number, found {x}"));
    }
    Ok(x as u32)
}

/// A number or a pair, as a point; the flag says whether it was a pair.
fn point(n: &Node, what: &str) -> Result<(Point, bool), ExprError> {
    match n {
        Node::Num(x) => Ok((Point::scalar(*x), false)),
        Node::Tuple(v) if v.len() == 2 => Ok((Point::new(num(&v[0], what)?, num(&v[1], what)?), true)),
        _ => shape(format!("{what}: expected a number or a pair, found `{n}`")),
    }
}

fn arity(name: &str, args: &[Node], n: usize) -> Result<(), ExprError> {
    if args.len() != n {
        return shape(format!("`{name}` takes {n} argument(s), found {}", args.len()));
    }
    Ok(())
}

fn weighted(args: &[Node], name: &str) -> Result<Vec<(f64, Dart)>, ExprError> {
    if args.is_empty() {
        return shape(format!("`{name}` needs at least one component"));
    }
    args.iter()
        .map(|a| match a {
            Node::Weighted(w, inner) => Ok((*w, build_dart(inner)?)),
            _ => shape(format!("`{name}` components look like `w:dart`, found `{a}`")),
        })
        .collect()
}

/// Builds a dart from a parsed expression.
pub fn build_dart(node: &Node) -> Result<Dart, ExprError> {
    let Node::Call { name, args } = node else {
        return shape(format!("expected a dart, found `{node}`"));
    };
    let two = |what: &str| -> Result<(f64, f64), ExprError> {
        arity(name, args, 2)?;
        Ok((num(&args[0], what)?, num(&args[1], what)?))
    };
    let dart = match name.as_str() {
        "normal" => {
            let (m, s) = two("normal")?;
            Dart::normal(m, s)?
        }
        "uniform" => {
            let (lo, hi) = two("uniform")?;
            Dart::uniform(lo, hi)?
        }
        "cauchy" => {
            let (l, s) = two("cauchy")?;
            Dart::cauchy(l, s)?
        }
        "bern" => {
            arity(name, args, 1)?;
            Dart::bern(num(&args[0], "bern")?)?
        }
        "atomic" => {
            if args.is_empty() {
                return shape("`atomic` needs at least one atom");
            }
            let mut atoms = Vec::with_capacity(args.len());
            let mut planar = None;
            for a in args {
                let Node::Tuple(v) = a else {
                    return shape(format!("atoms look like `(x,m)` or `((x,y),m)`, found `{a}`"));
                };
                if v.len() != 2 {
                    return shape(format!("atoms look like `(x,m)` or `((x,y),m)`, found `{a}`"));
                }
                let (at, is_pair) = point(&v[0], "atom location")?;
                if *planar.get_or_insert(is_pair) != is_pair {
                    return shape("atoms mix one- and two-dimensional locations");
                }
                atoms.push((at, num(&v[1], "atom mass")?));
            }
            Dart::atomic(if planar == Some(true) { 2 } else { 1 }, atoms)?
        }
        "semicircle" | "arcsine" | "tentcf" | "cantor" | "disc" => {
            arity(name, args, 0)?;
            match name.as_str() {
                "semicircle" => Dart::SemiCircle,
                "arcsine" => Dart::Arcsine,
                "tentcf" => Dart::TentCf,
                "cantor" => Dart::Cantor,
                _ => Dart::UniformDisc,
            }
        }
        "grid" => {
            arity(name, args, 1)?;
            Dart::grid(count(&args[0], "grid")?)?
        }
        "mix" => Dart::mixture(weighted(args, "mix")?)?,
        "sum" => Dart::indep_sum(weighted(args, "sum")?)?,
        "affine" => {
            arity(name, args, 3)?;
            let a = num(&args[0], "affine scale")?;
            let (b, _) = point(&args[1], "affine shift")?;
            Dart::affine(a, b, build_dart(&args[2])?)?
        }
        other => return shape(format!("unknown dart `{other}`")),
    };
    Ok(dart)
}

/// Builds a payoff from a parsed expression.
pub fn build_payoff(node: &Node) -> Result<Payoff, ExprError> {
    let Node::Call { name, args } = node else {
        return shape(format!("expected a payoff, found `{node}`"));
    };
    let f = match name.as_str() {
        "cos" => match args.len() {
            0 => Payoff::cosine(),
            2 => {
                let f = Payoff::Cosine { weights: vec![num(&args[0], "cos")?, num(&args[1], "cos")?] };
                f.validate()?;
                f
            }
            n => return shape(format!("`cos` takes 0 or 2 arguments, found {n}")),
        },
        "squarewave" => {
            arity(name, args, 0)?;
            Payoff::SquareWave
        }
        "dartboard" => {
            arity(name, args, 0)?;
            Payoff::dartboard()
        }
        "comb" => {
            arity(name, args, 2)?;
            make_comb(count(&args[0], "comb k")?, count(&args[1], "comb mmax")?)?
        }
        "kdelta" => {
            arity(name, args, 2)?;
            Payoff::kdelta(num(&args[0], "kdelta")?, num(&args[1], "kdelta")?)?
        }
        "zeroconstruct" => {
            arity(name, args, 1)?;
            make_zero_construct(&build_dart(&args[0])?)?
        }
        "singularatom" => {
            arity(name, args, 2)?;
            Payoff::singular_atom(num(&args[0], "singularatom")?, num(&args[1], "singularatom")?)?
        }
        "truncate" => {
            arity(name, args, 2)?;
            truncate(build_payoff(&args[1])?, num(&args[0], "truncate radius")?)?
        }
        "gaussbump" => {
            arity(name, args, 2)?;
            let (c, planar) = point(&args[0], "gaussbump center")?;
            Payoff::gauss_bump(c, num(&args[1], "gaussbump width")?, if planar { 2 } else { 1 })?
        }
        "pointstep" => {
            arity(name, args, 3)?;
            Payoff::point_step(num(&args[0], "pointstep")?, num(&args[1], "pointstep")?, num(&args[2], "pointstep")?)?
        }
        "pwl" => {
            let knots = args
                .iter()
                .map(|a| match point(a, "pwl knot")? {
                    (p, true) => Ok((p.x, p.y)),
                    _ => shape(format!("pwl knots look like `(x,y)`, found `{a}`")),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Payoff::piecewise_linear(knots)?
        }
        "slice" => {
            arity(name, args, 2)?;
            match point(&args[1], "slice direction")? {
                (u, true) => Payoff::slice(build_payoff(&args[0])?, u)?,
                _ => return shape("slice direction looks like `(ux,uy)`"),
            }
        }
        other => return shape(format!("unknown payoff `{other}`")),
    };
    Ok(f)
}

pub fn parse_dart(text: &str) -> Result<Dart, ExprError> {
    build_dart(&parse_node(text)?)
}

pub fn parse_payoff(text: &str) -> Result<Payoff, ExprError> {
    build_payoff(&parse_node(text)?)
}

fn call(name: &str, args: Vec<Node>) -> Node {
    Node::Call { name: name.into(), args }
}

fn point_node(p: Point, planar: bool) -> Node {
    if planar {
        Node::Tuple(vec![Node::Num(p.x), Node::Num(p.y)])
    } else {
        Node::Num(p.x)
    }
}

/// The canonical expression of a dart.
pub fn dart_node(dart: &Dart) -> Node {
    let n = Node::Num;
    match dart {
        Dart::Atomic { dim, atoms } => {
            call("atomic", atoms.iter().map(|a| Node::Tuple(vec![point_node(a.at, *dim == 2), n(a.mass)])).collect())
        }
        Dart::Uniform { lo, hi } => call("uniform", vec![n(*lo), n(*hi)]),
        Dart::Normal { mean, sd } => call("normal", vec![n(*mean), n(*sd)]),
        Dart::Cauchy { loc, scale } => call("cauchy", vec![n(*loc), n(*scale)]),
        Dart::SemiCircle => call("semicircle", vec![]),
        Dart::Arcsine => call("arcsine", vec![]),
        Dart::TentCf => call("tentcf", vec![]),
        Dart::Cantor => call("cantor", vec![]),
        Dart::GridUniform { k } => call("grid", vec![n(f64::from(*k))]),
        Dart::UniformDisc => call("disc", vec![]),
        Dart::Mixture(parts) => call("mix", parts.iter().map(|(w, d)| Node::Weighted(*w, Box::new(dart_node(d)))).collect()),
        Dart::IndepSum(parts) => call("sum", parts.iter().map(|(c, d)| Node::Weighted(*c, Box::new(dart_node(d)))).collect()),
        Dart::Affine { scale, shift, inner } => call("affine", vec![n(*scale), point_node(*shift, inner.dim() == 2), dart_node(inner)]),
    }
}

/// The canonical expression of a payoff. Constructions derived from a dart
/// (and boards with non-standard geometry) have no expression of their own.
pub fn payoff_node(f: &Payoff) -> Option<Node> {
    let n = Node::Num;
    Some(match f {
        Payoff::Cosine { weights } => call("cos", weights.iter().map(|w| n(*w)).collect()),
        Payoff::SquareWave => call("squarewave", vec![]),
        Payoff::Comb { k, m_max } => call("comb", vec![n(f64::from(*k)), n(f64::from(*m_max))]),
        Payoff::Dartboard(g) if *g == BoardGeometry::standard() => call("dartboard", vec![]),
        Payoff::Dartboard(_) | Payoff::ZeroConstruct(_) => return None,
        Payoff::KDelta { delta, p0 } => call("kdelta", vec![n(*delta), n(*p0)]),
        Payoff::SingularAtom { atom, p } => call("singularatom", vec![n(*atom), n(*p)]),
        Payoff::PointStep { value, radius, outer } => call("pointstep", vec![n(*value), n(*radius), n(*outer)]),
        Payoff::Truncated { inner, radius } => call("truncate", vec![n(*radius), payoff_node(inner)?]),
        Payoff::GaussBump { center, width, dim } => call("gaussbump", vec![point_node(*center, *dim == 2), n(*width)]),
        Payoff::PiecewiseLinear(k) => call("pwl", k.iter().map(|&(x, y)| Node::Tuple(vec![n(x), n(y)])).collect()),
        Payoff::Slice { inner, direction } => call("slice", vec![payoff_node(inner)?, point_node(*direction, true)]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_examples() {
        let d = parse_dart("mix(0.5:atomic((0,1)),0.5:normal(0,1))").unwrap();
        let want = Dart::mixture(vec![(0.5, Dart::point_mass(0.0)), (0.5, Dart::normal(0.0, 1.0).unwrap())]).unwrap();
        assert_eq!(d, want);
        assert_eq!(parse_dart("uniform(0,2)").unwrap(), Dart::uniform(0.0, 2.0).unwrap());
        assert!(matches!(parse_dart("bern(1.5)"), Err(ExprError::Dart(_))));
    }

    #[test]
    fn whitespace_and_case() {
        let d = parse_dart("  Affine( 2 , (1, -0.5) , disc )").unwrap();
        assert_eq!(d, Dart::affine(2.0, Point::new(1.0, -0.5), Dart::UniformDisc).unwrap());
        assert_eq!(parse_payoff("truncate(3, squarewave)").unwrap(), truncate(Payoff::SquareWave, 3.0).unwrap());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(parse_dart("normal(0,1"), Err(ExprError::Syntax { pos: 10, msg: "expected `)`".into() }));
        assert!(matches!(parse_dart("normal(0,1e-3)"), Err(ExprError::Syntax { pos: 10, .. })));
        assert!(matches!(parse_dart("normal(0,1) x"), Err(ExprError::Syntax { pos: 12, .. })));
        assert!(matches!(parse_dart("(1,2)"), Err(ExprError::Syntax { pos: 0, .. })));
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(parse_dart("normal(0)"), Err(ExprError::Shape(_))));
        assert!(matches!(parse_dart("wobble(1)"), Err(ExprError::Shape(_))));
        assert!(matches!(parse_dart("grid(2.5)"), Err(ExprError::Shape(_))));
        assert!(matches!(parse_dart("mix(normal(0,1))"), Err(ExprError::Shape(_))));
        assert!(matches!(parse_dart("atomic((0,0.5);((1,1),0.5))"), Err(ExprError::Shape(_))));
        assert!(matches!(parse_payoff("pwl((0,1);2)"), Err(ExprError::Shape(_))));
        assert!(matches!(parse_payoff("zeroconstruct(normal(0,1))"), Err(ExprError::Payoff(_))));
    }

    #[test]
    fn canonical_text() {
        let d = parse_dart("mix( 0.5 : bern(0.3) ; 0.5 : sum(1:cantor, 2:tentcf) )").unwrap();
        assert_eq!(dart_node(&d).to_string(), "mix(0.5:atomic((0,0.7);(1,0.3)),0.5:sum(1:cantor,2:tentcf))");
        let f = parse_payoff("slice(dartboard, (0, 1))").unwrap();
        assert_eq!(payoff_node(&f).unwrap().to_string(), "slice(dartboard,(0,1))");
        assert!(payoff_node(&parse_payoff("zeroconstruct(bern(0.3))").unwrap()).is_none());
    }
}
