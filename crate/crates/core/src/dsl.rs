//! Text format for open books.
//!
//! ```text
//! # annulus with a right-handed core twist
//! page 0 2;
//! curve d = [0+ 1-];
//! word g = t(core)^1 t(d)^-2;
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::page::{check_twist_curve, EmbeddedPath, Letter, MappingClassWord, Page, Sign, TwistLetter};
use crate::{Error, Result};

/// A twist word over curve names, freely reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NamedWord {
    pub twists: Vec<(String, i32)>,
}

impl NamedWord {
    pub fn new(twists: Vec<(String, i32)>) -> Self {
        let mut out: Vec<(String, i32)> = Vec::new();
        for (c, p) in twists {
            match out.last_mut() {
                Some((last, q)) if *last == c => {
                    *q += p;
                    if *q == 0 {
                        out.pop();
                    }
                }
                _ if p != 0 => out.push((c, p)),
                _ => {}
            }
        }
        NamedWord { twists: out }
    }
}

impl std::fmt::Display for NamedWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.twists.is_empty() {
            return write!(f, "id");
        }
        for (i, (c, p)) in self.twists.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "t({c})^{p}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpenBookSpec {
    pub genus: usize,
    pub boundary: usize,
    pub curves: BTreeMap<String, EmbeddedPath>,
    /// Words in input order.
    pub words: Vec<(String, NamedWord)>,
}

/// Names available on every standard page: `c<i>` for the core of band
/// `i`, `core` on the annulus, and `p`, `q` for the first handle.
pub fn builtin_curves(page: &Page) -> Vec<(String, EmbeddedPath)> {
    let mut out: Vec<(String, EmbeddedPath)> = (0..page.arc_count()).map(|i| (format!("c{i}"), page.band_core(i))).collect();
    if page.genus() == 0 && page.boundary_count() == 2 {
        out.push(("core".into(), page.band_core(0)));
    }
    if page.genus() >= 1 {
        out.push(("p".into(), page.band_core(0)));
        out.push(("q".into(), page.band_core(1)));
    }
    out
}

impl OpenBookSpec {
    pub fn page(&self) -> Result<Page> {
        Page::standard(self.genus, self.boundary)
    }

    pub fn curve(&self, page: &Page, name: &str) -> Result<EmbeddedPath> {
        if let Some(c) = self.curves.get(name) {
            return Ok(c.clone());
        }
        builtin_curves(page)
            .into_iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c)
            .ok_or_else(|| Error::UnknownCurve(name.to_string()))
    }

    pub fn named_word(&self, name: &str) -> Result<&NamedWord> {
        self.words.iter().find(|(n, _)| n == name).map(|(_, w)| w).ok_or_else(|| Error::UnknownWord(name.to_string()))
    }

    pub fn word(&self, page: &Page, name: &str) -> Result<MappingClassWord> {
        self.resolve(page, self.named_word(name)?)
    }

    pub fn resolve(&self, page: &Page, w: &NamedWord) -> Result<MappingClassWord> {
        let mut letters = Vec::new();
        for (c, p) in &w.twists {
            let curve = self.curve(page, c)?;
            let e = p.signum();
            for _ in 0..p.unsigned_abs() {
                letters.push(TwistLetter { curve: curve.clone(), exponent: e });
            }
        }
        Ok(MappingClassWord::new(letters))
    }

    /// Canonical text form.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "page {} {};", self.genus, self.boundary).unwrap();
        for (n, c) in &self.curves {
            writeln!(s, "curve {n} = {c};").unwrap();
        }
        for (n, w) in &self.words {
            writeln!(s, "word {n} = {w};").unwrap();
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Punct(char),
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

fn lex(text: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (l, c) = (line, col);
        if ch == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if ch.is_whitespace() {
            chars.next();
            col += 1;
        } else if ch == '#' {
            while chars.peek().is_some_and(|&x| x != '\n') {
                chars.next();
            }
        } else if ch.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                col += 1;
            }
            let v = s.parse().map_err(|_| Error::Syntax { line: l, col: c, msg: format!("number `{s}` is too large") })?;
            toks.push((Tok::Int(v), l, c));
        } else if ch.is_alphabetic() || ch == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                s.push(d);
                chars.next();
                col += 1;
            }
            toks.push((Tok::Ident(s), l, c));
        } else if ";=[]()^+-".contains(ch) {
            chars.next();
            col += 1;
            toks.push((Tok::Punct(ch), l, c));
        } else {
            return Err(Error::Syntax { line: l, col: c, msg: format!("unexpected character `{ch}`") });
        }
    }
    Ok(Lexer { toks, pos: 0, end: (line, col) })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|t| (t.1, t.2)).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Syntax { line, col, msg: msg.into() })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.peek().cloned();
        self.pos += 1;
        t
    }

    fn punct(&mut self, p: char) -> Result<()> {
        match self.peek() {
            Some(Tok::Punct(q)) if *q == p => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected `{p}`")),
        }
    }

    fn eat(&mut self, p: char) -> bool {
        if self.peek() == Some(&Tok::Punct(p)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected a name"),
        }
    }

    fn uint(&mut self) -> Result<i64> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected a number"),
        }
    }

    fn int(&mut self) -> Result<i64> {
        if self.eat('-') {
            return Ok(-self.uint()?);
        }
        self.eat('+');
        self.uint()
    }
}

fn small<T: TryFrom<i64>>(lx: &Lexer, v: i64) -> Result<T> {
    T::try_from(v).or_else(|_| lx.err(format!("{v} is out of range")))
}

/// Parses a spec; validates curves and words against the page.
pub fn parse_spec(text: &str) -> Result<OpenBookSpec> {
    let mut lx = lex(text)?;
    let mut page: Option<(usize, usize)> = None;
    let mut curves: BTreeMap<String, EmbeddedPath> = BTreeMap::new();
    let mut words: Vec<(String, NamedWord)> = Vec::new();
    let mut refs: Vec<(String, (usize, usize))> = Vec::new();
    while let Some(t) = lx.peek().cloned() {
        let at = lx.here();
        let Tok::Ident(kw) = t else {
            return lx.err("expected `page`, `curve` or `word`");
        };
        lx.next();
        match kw.as_str() {
            "page" => {
                if page.is_some() {
                    return Err(Error::Syntax { line: at.0, col: at.1, msg: "duplicate page statement".into() });
                }
                let k = lx.uint()?;
                let k = small(&lx, k)?;
                let n = lx.uint()?;
                let n = small(&lx, n)?;
                lx.punct(';')?;
                page = Some((k, n));
            }
            "curve" => {
                let name = lx.ident()?;
                lx.punct('=')?;
                lx.punct('[')?;
                let mut letters = Vec::new();
                while !lx.eat(']') {
                    let a = lx.uint()?;
                    let a = small(&lx, a)?;
                    let side = if lx.eat('+') {
                        Sign::Plus
                    } else if lx.eat('-') {
                        Sign::Minus
                    } else {
                        return lx.err("expected `+` or `-` after an arc index");
                    };
                    letters.push(Letter::new(a, side));
                }
                lx.punct(';')?;
                if curves.insert(name.clone(), EmbeddedPath::closed(letters)).is_some() {
                    return Err(Error::Syntax { line: at.0, col: at.1, msg: format!("curve `{name}` defined twice") });
                }
            }
            "word" => {
                let name = lx.ident()?;
                lx.punct('=')?;
                let mut twists = Vec::new();
                loop {
                    match lx.peek() {
                        Some(Tok::Ident(s)) if s == "id" => {
                            lx.next();
                        }
                        Some(Tok::Ident(s)) if s == "t" => {
                            lx.next();
                            lx.punct('(')?;
                            let here = lx.here();
                            let c = lx.ident()?;
                            lx.punct(')')?;
                            let p = if lx.eat('^') { lx.int()? } else { 1 };
                            let p = small(&lx, p)?;
                            refs.push((c.clone(), here));
                            twists.push((c, p));
                        }
                        _ => break,
                    }
                }
                lx.punct(';')?;
                if words.iter().any(|(n, _)| *n == name) {
                    return Err(Error::Syntax { line: at.0, col: at.1, msg: format!("word `{name}` defined twice") });
                }
                words.push((name, NamedWord::new(twists)));
            }
            _ => return Err(Error::Syntax { line: at.0, col: at.1, msg: format!("unknown statement `{kw}`") }),
        }
    }
    let Some((genus, boundary)) = page else {
        let (line, col) = lx.end;
        return Err(Error::Syntax { line, col, msg: "missing `page` statement".into() });
    };
    let spec = OpenBookSpec { genus, boundary, curves, words };
    let page = spec.page()?;
    for c in spec.curves.values() {
        check_twist_curve(&page, c)?;
    }
    for (c, _) in &refs {
        spec.curve(&page, c)?;
    }
    Ok(spec)
}
