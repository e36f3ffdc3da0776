use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed};

use crate::algebra::{AlgebraError, Poly, Presentation};
use crate::grading::{format_scalar, parse_scalar, Bidegree, Scalar};

/// A diagnostic anchored at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        column,
        message: message.into(),
    })
}

/// A parsed presentation file: the presentation plus optional expected
/// dimensions of the expanded algebra.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PresentationFile {
    pub presentation: Presentation,
    pub expect: BTreeMap<Bidegree, usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Generators,
    Relations,
    Differential,
    Expect,
}

const KEYWORDS: [&str; 6] = [
    "name",
    "field",
    "generators",
    "relations",
    "differential",
    "expect",
];

fn is_label(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Whitespace-separated fields with their 1-based columns.
fn fields(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(s, f)| (line[..s].chars().count() + 1, f))
        .collect()
}

fn parse_int(line: usize, (col, s): (usize, &str), what: &str) -> Result<i64, ParseError> {
    s.parse().or_else(|_| {
        err(
            line,
            col,
            format!("expected an integer {what}, found `{s}`"),
        )
    })
}

struct PolyParser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    offset: usize,
    labels: &'a BTreeMap<String, usize>,
}

impl<'a> PolyParser<'a> {
    fn column(&self) -> usize {
        self.src[..self.pos].chars().count() + self.offset
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        err(self.line, self.column(), msg)
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn number(&mut self) -> Result<Scalar, ParseError> {
        let col = self.column();
        let mut text = self.take_while(|c| c.is_ascii_digit()).to_string();
        if self.peek() == Some('/') {
            self.pos += 1;
            let d = self.take_while(|c| c.is_ascii_digit());
            if d.is_empty() {
                return self.fail("expected a denominator after `/`");
            }
            text = format!("{text}/{d}");
        }
        parse_scalar(&text).map_or_else(
            || err(self.line, col, format!("bad coefficient `{text}`")),
            Ok,
        )
    }

    /// factor := label ['^' n] | number
    fn factor(&mut self, coeff: &mut Scalar, word: &mut Vec<usize>) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let q = self.number()?;
                *coeff *= q;
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let col = self.column();
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
                let Some(&g) = self.labels.get(name) else {
                    return err(self.line, col, format!("unknown generator `{name}`"));
                };
                let mut power = 1;
                self.skip_ws();
                if self.peek() == Some('^') {
                    self.pos += 1;
                    self.skip_ws();
                    let pcol = self.column();
                    let digits = self.take_while(|c| c.is_ascii_digit());
                    power = match digits.parse::<usize>() {
                        Ok(p) if p > 0 => p,
                        _ => return err(self.line, pcol, "expected a positive exponent"),
                    };
                }
                word.extend(std::iter::repeat_n(g, power));
            }
            Some(c) => return self.fail(format!("unexpected `{c}`")),
            None => return self.fail("unexpected end of expression"),
        }
        Ok(())
    }

    fn poly(&mut self) -> Result<Poly, ParseError> {
        let mut p = Poly::zero();
        let mut first = true;
        loop {
            self.skip_ws();
            let mut sign = Scalar::one();
            match self.peek() {
                Some('+') if !first => self.pos += 1,
                Some('-') => {
                    self.pos += 1;
                    sign = -sign;
                }
                None if first => return self.fail("empty expression"),
                None => break,
                _ if !first => return self.fail("expected `+` or `-`"),
                _ => {}
            }
            first = false;
            let mut coeff = sign;
            let mut word = Vec::new();
            self.factor(&mut coeff, &mut word)?;
            loop {
                self.skip_ws();
                if self.peek() != Some('*') {
                    break;
                }
                self.pos += 1;
                self.factor(&mut coeff, &mut word)?;
            }
            p.add_term(coeff, word);
        }
        Ok(p)
    }
}

fn parse_poly(
    src: &str,
    line: usize,
    column: usize,
    labels: &BTreeMap<String, usize>,
) -> Result<Poly, ParseError> {
    PolyParser {
        src,
        pos: 0,
        line,
        offset: column,
        labels,
    }
    .poly()
}

/// Parses the sectioned text format:
///
/// ```text
/// name exterior1
/// field Q
/// generators
///   x 0 1
/// relations
///   x*x
/// differential
///   y -> x^2
/// expect
///   0 1 1
/// ```
///
/// Section entries are indented; `#` starts a comment.
pub fn parse_presentation_file(text: &str) -> Result<PresentationFile, ParseError> {
    let mut p = Presentation::new("unnamed");
    let mut expect = BTreeMap::new();
    let mut labels: BTreeMap<String, usize> = BTreeMap::new();
    let mut section: Option<Section> = None;
    let mut seen_field = false;
    let mut seen_name = false;
    let mut relation_lines = Vec::new();
    let mut differential_lines = BTreeMap::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap();
        if body.trim().is_empty() {
            continue;
        }
        let f = fields(body);
        if !body.starts_with(char::is_whitespace) {
            let (col, key) = f[0];
            let args = &f[1..];
            section = None;
            match key {
                "name" | "field" => {
                    let [(vcol, value)] = args else {
                        return err(line, col, format!("`{key}` takes exactly one value"));
                    };
                    if key == "field" {
                        if seen_field {
                            return err(line, col, "duplicate `field`");
                        }
                        if *value != "Q" {
                            return err(
                                line,
                                *vcol,
                                format!("unsupported field `{value}`; only Q"),
                            );
                        }
                        seen_field = true;
                    } else {
                        if seen_name {
                            return err(line, col, "duplicate `name`");
                        }
                        p.name = value.to_string();
                        seen_name = true;
                    }
                }
                "generators" | "relations" | "differential" | "expect" => {
                    if let Some((c, _)) = args.first() {
                        return err(line, *c, format!("section header `{key}` takes no values"));
                    }
                    section = Some(match key {
                        "generators" => Section::Generators,
                        "relations" => Section::Relations,
                        "differential" => Section::Differential,
                        _ => Section::Expect,
                    });
                }
                _ => return err(line, col, format!("unknown key `{key}`")),
            }
            continue;
        }
        let col0 = f[0].0;
        match section {
            None => return err(line, col0, "indented entry outside a section"),
            Some(Section::Generators) => {
                let [(lcol, label), h, a] = f[..] else {
                    return err(line, col0, "expected `label h a`");
                };
                if !is_label(label) || KEYWORDS.contains(&label) {
                    return err(line, lcol, format!("invalid generator label `{label}`"));
                }
                if labels.contains_key(label) {
                    return err(line, lcol, format!("duplicate generator `{label}`"));
                }
                let h = parse_int(line, h, "homological degree")?;
                let a = parse_int(line, a, "Adams degree")?;
                labels.insert(label.to_string(), p.add_generator(label, h, a));
            }
            Some(Section::Relations) => {
                let r = parse_poly(body.trim_start(), line, col0, &labels)?;
                relation_lines.push((line, col0, body.trim().to_string()));
                p.relations.push(r);
            }
            Some(Section::Differential) => {
                let Some((lhs, rhs)) = body.split_once("->") else {
                    return err(line, col0, "expected `generator -> polynomial`");
                };
                let lhs = lhs.trim();
                let Some(&g) = labels.get(lhs) else {
                    return err(line, col0, format!("unknown generator `{lhs}`"));
                };
                if differential_lines.contains_key(&g) {
                    return err(line, col0, format!("duplicate differential for `{lhs}`"));
                }
                let rcol = body.len() - rhs.len();
                let v = parse_poly(rhs, line, body[..rcol].chars().count() + 1, &labels)?;
                differential_lines.insert(g, (line, col0));
                if !v.is_zero() {
                    p.differential.insert(g, v);
                }
            }
            Some(Section::Expect) => {
                let [h, a, (dcol, dim)] = f[..] else {
                    return err(line, col0, "expected `h a dim`");
                };
                let d = Bidegree::new(parse_int(line, h, "h")?, parse_int(line, a, "a")?);
                let n: usize = dim
                    .parse()
                    .or_else(|_| err(line, dcol, format!("expected a dimension, found `{dim}`")))?;
                if expect.insert(d, n).is_some() {
                    return err(line, col0, format!("duplicate expectation at {d}"));
                }
            }
        }
    }
    if !seen_field {
        return err(1, 1, "missing `field Q`");
    }
    if let Err(e) = p.validate() {
        return Err(match e {
            AlgebraError::InhomogeneousRelation { relation, detail } => {
                let at = relation_lines
                    .iter()
                    .zip(&p.relations)
                    .find(|(_, r)| p.render(r) == relation)
                    .map(|((l, c, _), _)| (*l, *c))
                    .unwrap_or((1, 1));
                ParseError {
                    line: at.0,
                    column: at.1,
                    message: format!("inhomogeneous relation `{relation}`: {detail}"),
                }
            }
            AlgebraError::BadDifferential { generator, detail } => {
                let at = labels
                    .get(&generator)
                    .and_then(|g| differential_lines.get(g))
                    .copied()
                    .unwrap_or((1, 1));
                ParseError {
                    line: at.0,
                    column: at.1,
                    message: format!("bad differential on `{generator}`: {detail}"),
                }
            }
            other => ParseError {
                line: 1,
                column: 1,
                message: other.to_string(),
            },
        });
    }
    Ok(PresentationFile {
        presentation: p,
        expect,
    })
}

pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    parse_presentation_file(text).map(|f| f.presentation)
}

fn render_poly(p: &Presentation, poly: &Poly) -> String {
    let mut out = String::new();
    for (k, (w, c)) in poly.terms().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        out.push_str(match (k, neg) {
            (0, false) => "",
            (0, true) => "-",
            (_, false) => " + ",
            (_, true) => " - ",
        });
        let word: Vec<&str> = w.iter().map(|g| p.generators[*g].label.as_str()).collect();
        let coeff = if mag.is_integer() {
            mag.numer().to_string()
        } else {
            format_scalar(&mag)
        };
        match (mag.is_one(), word.is_empty()) {
            (true, true) => out.push('1'),
            (true, false) => out.push_str(&word.join("*")),
            (false, true) => out.push_str(&coeff),
            (false, false) => {
                let _ = write!(out, "{coeff}*{}", word.join("*"));
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Canonical text; parsing it gives back an identical file.
pub fn render_presentation_file(f: &PresentationFile) -> String {
    let p = &f.presentation;
    let mut out = String::new();
    let _ = writeln!(out, "name {}", p.name);
    out.push_str("field Q\n");
    out.push_str("generators\n");
    for g in &p.generators {
        let _ = writeln!(out, "  {} {} {}", g.label, g.degree.h, g.degree.a);
    }
    if !p.relations.is_empty() {
        out.push_str("relations\n");
        for r in &p.relations {
            let _ = writeln!(out, "  {}", render_poly(p, r));
        }
    }
    if !p.differential.is_empty() {
        out.push_str("differential\n");
        for (g, v) in &p.differential {
            let _ = writeln!(out, "  {} -> {}", p.generators[*g].label, render_poly(p, v));
        }
    }
    if !f.expect.is_empty() {
        out.push_str("expect\n");
        for (d, n) in &f.expect {
            let _ = writeln!(out, "  {} {} {}", d.h, d.a, n);
        }
    }
    out
}

pub fn render_presentation(p: &Presentation) -> String {
    render_presentation_file(&PresentationFile {
        presentation: p.clone(),
        expect: BTreeMap::new(),
    })
}
