//! Text form of generators, used by the command line.
//!
//! ```text
//! gen   := "power:" n | "exp" | "reciprocal" | "const:" c | "iota"
//!        | "nonex:conj" | "nonex:radial"
//!        | "add(" gen "," gen ")" | "mul(" gen "," gen ")" | "inv(" gen ")"
//!        | "prodform(" stem "," stem ")"
//! stem  := "poly:" n | "power:" n | "id" | "exp" | "reciprocal" | "const:" c
//! ```

use std::fmt;
use std::str::FromStr;

use super::{
    cl_add, cl_inv, cl_mul, make_constant, make_exp, make_iota, make_power, make_product_form,
    make_reciprocal, nonexample_conjugate, nonexample_radial, ComplexLikePair, Stem,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Power(u32),
    Exp,
    Reciprocal,
    Constant(f64),
    ProductForm(Stem, Stem),
    Iota,
    NonexConj,
    NonexRadial,
    Add(Box<GeneratorSpec>, Box<GeneratorSpec>),
    Mul(Box<GeneratorSpec>, Box<GeneratorSpec>),
    Inv(Box<GeneratorSpec>),
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<ComplexLikePair> {
        Ok(match self {
            GeneratorSpec::Power(n) => make_power(*n),
            GeneratorSpec::Exp => make_exp(),
            GeneratorSpec::Reciprocal => make_reciprocal(),
            GeneratorSpec::Constant(c) => make_constant(*c),
            GeneratorSpec::ProductForm(f, g) => make_product_form(*f, *g)?,
            GeneratorSpec::Iota => make_iota(),
            GeneratorSpec::NonexConj => nonexample_conjugate(),
            GeneratorSpec::NonexRadial => nonexample_radial(),
            GeneratorSpec::Add(a, b) => cl_add(&a.build()?, &b.build()?),
            GeneratorSpec::Mul(a, b) => cl_mul(&a.build()?, &b.build()?),
            GeneratorSpec::Inv(a) => cl_inv(&a.build()?),
        })
    }

    /// Known violators of the Cauchy-Riemann system.
    pub fn is_nonexample(&self) -> bool {
        match self {
            GeneratorSpec::NonexConj | GeneratorSpec::NonexRadial => true,
            GeneratorSpec::Add(a, b) | GeneratorSpec::Mul(a, b) => {
                a.is_nonexample() || b.is_nonexample()
            }
            GeneratorSpec::Inv(a) => a.is_nonexample(),
            _ => false,
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Power(n) => write!(f, "power:{n}"),
            GeneratorSpec::Exp => f.write_str("exp"),
            GeneratorSpec::Reciprocal => f.write_str("reciprocal"),
            GeneratorSpec::Constant(c) => write!(f, "const:{c}"),
            GeneratorSpec::ProductForm(a, b) => write!(f, "prodform({a},{b})"),
            GeneratorSpec::Iota => f.write_str("iota"),
            GeneratorSpec::NonexConj => f.write_str("nonex:conj"),
            GeneratorSpec::NonexRadial => f.write_str("nonex:radial"),
            GeneratorSpec::Add(a, b) => write!(f, "add({a},{b})"),
            GeneratorSpec::Mul(a, b) => write!(f, "mul({a},{b})"),
            GeneratorSpec::Inv(a) => write!(f, "inv({a})"),
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let g = p.generator()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error(&s[p.pos..], "unexpected trailing input"));
        }
        Ok(g)
    }
}

/// Built-in generators with a one-line description.
pub fn catalog() -> Vec<(&'static str, &'static str)> {
    vec![
        ("power:n", "intrinsic lift of (t + i r)^n, n >= 0"),
        ("exp", "intrinsic lift of e^(t + i r)"),
        ("reciprocal", "intrinsic lift of 1 / (t + i r)"),
        ("const:c", "real constant c"),
        ("prodform(F,G)", "F(t + i r) G(alpha + i ln tan(beta/2)); F, G in poly:n, exp, const:c (F may be reciprocal); local only"),
        ("iota", "u = 0, v = 1 (the unit imaginary iota itself)"),
        ("nonex:conj", "non-example u = t, v = -r (quaternion conjugate)"),
        ("nonex:radial", "non-example u = r, v = 0"),
        ("add(f,g)", "pointwise sum"),
        ("mul(f,g)", "pointwise product"),
        ("inv(f)", "pointwise algebraic inverse"),
    ]
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, token: &str, reason: &str) -> Error {
        Error::Parse {
            token: token.trim().to_string(),
            reason: reason.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..]
                .chars()
                .next()
                .map_or(1, char::len_utf8);
        }
    }

    /// A name like `power` or `nonex`, plus an optional `:arg`.
    fn atom(&mut self) -> Result<(&'a str, Option<&'a str>, &'a str)> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let end = rest.find(['(', ')', ',']).unwrap_or(rest.len());
        let token = rest[..end].trim_end();
        if token.is_empty() {
            return Err(self.error(rest, "expected a generator name"));
        }
        self.pos += end;
        let (name, arg) = match token.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (token, None),
        };
        Ok((name, arg, token))
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += 1;
            Ok(())
        } else {
            let rest = &self.src[self.pos..];
            Err(self.error(
                if rest.is_empty() { self.src } else { rest },
                &format!("expected `{c}`"),
            ))
        }
    }

    fn generator(&mut self) -> Result<GeneratorSpec> {
        let (name, arg, token) = self.atom()?;
        let reject_arg = |p: &Self| match arg {
            Some(_) => Err(p.error(token, "takes no argument")),
            None => Ok(()),
        };
        let no_arg = |p: &Self, g: GeneratorSpec| reject_arg(p).map(|_| g);
        match name {
            "power" | "poly" => Ok(GeneratorSpec::Power(self.uint(arg, token)?)),
            "exp" => no_arg(self, GeneratorSpec::Exp),
            "reciprocal" | "recip" => no_arg(self, GeneratorSpec::Reciprocal),
            "const" | "constant" => Ok(GeneratorSpec::Constant(self.real(arg, token)?)),
            "iota" => no_arg(self, GeneratorSpec::Iota),
            "nonex" => match arg {
                Some("conj") => Ok(GeneratorSpec::NonexConj),
                Some("radial") => Ok(GeneratorSpec::NonexRadial),
                _ => Err(self.error(token, "unknown non-example (expected conj or radial)")),
            },
            "add" | "mul" => {
                reject_arg(self)?;
                self.expect('(')?;
                let a = self.generator()?;
                self.expect(',')?;
                let b = self.generator()?;
                self.expect(')')?;
                let (a, b) = (Box::new(a), Box::new(b));
                Ok(if name == "add" {
                    GeneratorSpec::Add(a, b)
                } else {
                    GeneratorSpec::Mul(a, b)
                })
            }
            "inv" => {
                reject_arg(self)?;
                self.expect('(')?;
                let a = self.generator()?;
                self.expect(')')?;
                Ok(GeneratorSpec::Inv(Box::new(a)))
            }
            "prodform" => {
                reject_arg(self)?;
                self.expect('(')?;
                let f = self.stem()?;
                self.expect(',')?;
                let g = self.stem()?;
                if matches!(g, Stem::Reciprocal) {
                    return Err(
                        self.error("reciprocal", "angular factor must be poly, exp or const")
                    );
                }
                self.expect(')')?;
                Ok(GeneratorSpec::ProductForm(f, g))
            }
            _ => Err(self.error(token, "unknown generator")),
        }
    }

    fn stem(&mut self) -> Result<Stem> {
        let (name, arg, token) = self.atom()?;
        match (name, arg) {
            ("poly" | "power", a) => Ok(Stem::Power(self.uint(a, token)?)),
            ("id", None) => Ok(Stem::Power(1)),
            ("exp", None) => Ok(Stem::Exp),
            ("reciprocal" | "recip", None) => Ok(Stem::Reciprocal),
            ("const" | "constant", a) => Ok(Stem::Const(self.real(a, token)?)),
            _ => Err(self.error(token, "unknown stem")),
        }
    }

    fn uint(&self, arg: Option<&str>, token: &str) -> Result<u32> {
        arg.and_then(|a| a.parse().ok())
            .ok_or_else(|| self.error(token, "expected a non-negative integer argument"))
    }

    fn real(&self, arg: Option<&str>, token: &str) -> Result<f64> {
        arg.and_then(|a| a.parse::<f64>().ok())
            .filter(|c| c.is_finite())
            .ok_or_else(|| self.error(token, "expected a finite real argument"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_documented_forms() {
        assert_eq!(
            "power:3".parse::<GeneratorSpec>().unwrap(),
            GeneratorSpec::Power(3)
        );
        assert_eq!("exp".parse::<GeneratorSpec>().unwrap(), GeneratorSpec::Exp);
        assert_eq!(
            "mul(power:2,exp)".parse::<GeneratorSpec>().unwrap(),
            GeneratorSpec::Mul(
                Box::new(GeneratorSpec::Power(2)),
                Box::new(GeneratorSpec::Exp)
            )
        );
        assert_eq!(
            "prodform(exp,poly:1)".parse::<GeneratorSpec>().unwrap(),
            GeneratorSpec::ProductForm(Stem::Exp, Stem::Power(1))
        );
        assert_eq!(
            " inv( add(const:2.5 , nonex:radial) ) "
                .parse::<GeneratorSpec>()
                .unwrap()
                .to_string(),
            "inv(add(const:2.5,nonex:radial))"
        );
    }

    #[test]
    fn rejects_bad_tokens() {
        match "bogus:q".parse::<GeneratorSpec>() {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "bogus:q"),
            other => panic!("{other:?}"),
        }
        match "mul(power:2,wat)".parse::<GeneratorSpec>() {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "wat"),
            other => panic!("{other:?}"),
        }
        for bad in [
            "power",
            "power:-1",
            "exp:2",
            "mul(exp)",
            "exp)",
            "prodform(exp,reciprocal)",
            "",
            "const:nan",
        ] {
            assert!(bad.parse::<GeneratorSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn built_label_matches_text() {
        for s in [
            "power:4",
            "mul(power:2,exp)",
            "prodform(exp,poly:1)",
            "inv(reciprocal)",
            "nonex:conj",
        ] {
            let g: GeneratorSpec = s.parse().unwrap();
            assert_eq!(g.build().unwrap().label(), s);
        }
    }

    fn spec_strategy() -> impl Strategy<Value = GeneratorSpec> {
        let leaf = prop_oneof![
            (0u32..7).prop_map(GeneratorSpec::Power),
            Just(GeneratorSpec::Exp),
            Just(GeneratorSpec::Reciprocal),
            (-5.0f64..5.0).prop_map(GeneratorSpec::Constant),
            Just(GeneratorSpec::ProductForm(Stem::Exp, Stem::Power(2))),
            Just(GeneratorSpec::NonexRadial),
        ];
        leaf.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| GeneratorSpec::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| GeneratorSpec::Mul(Box::new(a), Box::new(b))),
                inner.prop_map(|a| GeneratorSpec::Inv(Box::new(a))),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(g in spec_strategy()) {
            let text = g.to_string();
            prop_assert_eq!(text.parse::<GeneratorSpec>().unwrap(), g);
        }
    }
}
