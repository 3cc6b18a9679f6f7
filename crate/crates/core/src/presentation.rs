//! Line-based power-commutator presentation of `G_k`, for export to other
//! systems and as input to the coset-enumeration oracle.
//!
//! ```text
//! level 1
//! generators x y0 y1 s0 s1 c0_1
//! relation x^2 = 1
//! relation y0^2 = s0
//! relation [y0,y1] = c0_1
//! relation y0^x = y1
//! ```
//!
//! A word is `1` or factors joined by `*`; a factor is `g`, `g^e` (integer
//! `e`), `g^h` (conjugate by a generator) or `[g,h]`.

use crate::context::GroupContext;
use crate::element::Element;
use crate::error::GroupError;

/// Letters are `(generator index, ±1)`.
pub type Word = Vec<(usize, i8)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub k: u32,
    pub generators: Vec<String>,
    pub relations: Vec<(Word, Word)>,
    /// Relations as written, for error messages.
    pub relation_text: Vec<String>,
}

fn generator_names(ctx: &GroupContext) -> Vec<String> {
    let n = ctx.n;
    let mut names = vec!["x".to_string()];
    names.extend((0..n).map(|i| format!("y{i}")));
    names.extend((0..n).map(|i| format!("s{i}")));
    names.extend((0..ctx.pair_count()).map(|p| {
        let (i, j) = ctx.pair_at(p);
        format!("c{i}_{j}")
    }));
    names
}

fn pair_name(i: usize, j: usize) -> String {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    format!("c{i}_{j}")
}

/// Writes the presentation text for `ctx`.
pub fn export(ctx: &GroupContext) -> String {
    let n = ctx.n;
    let names = generator_names(ctx);
    let mut out = String::new();
    out.push_str(&format!("# power-commutator presentation of G_{}\n", ctx.k));
    out.push_str(&format!("# log2 order {}\n", ctx.log_order()));
    out.push_str(&format!("level {}\n", ctx.k));
    out.push_str(&format!("generators {}\n", names.join(" ")));
    let mut rel = |s: String| {
        out.push_str("relation ");
        out.push_str(&s);
        out.push('\n');
    };
    rel(format!("x^{n} = 1"));
    for i in 0..n {
        rel(format!("y{i}^2 = s{i}"));
    }
    for i in 0..n {
        for j in i + 1..n {
            rel(format!("[y{i},y{j}] = {}", pair_name(i, j)));
        }
    }
    let centrals: Vec<String> = names[1 + n..].to_vec();
    for c in &centrals {
        rel(format!("{c}^2 = 1"));
    }
    for c in &centrals {
        for i in 0..n {
            rel(format!("[{c},y{i}] = 1"));
        }
    }
    for i in 0..n {
        rel(format!("y{i}^x = y{}", (i + 1) % n));
    }
    for i in 0..n {
        rel(format!("s{i}^x = s{}", (i + 1) % n));
    }
    for p in 0..ctx.pair_count() {
        let (i, j) = ctx.pair_at(p);
        rel(format!("{}^x = {}", pair_name(i, j), pair_name((i + 1) % n, (j + 1) % n)));
    }
    out
}

fn parse_word(text: &str, names: &[String]) -> Result<Word, String> {
    let gen = |s: &str| -> Result<usize, String> {
        names
            .iter()
            .position(|g| g == s.trim())
            .ok_or_else(|| format!("unknown generator {s:?}"))
    };
    let text = text.trim();
    if text == "1" {
        return Ok(Vec::new());
    }
    let mut word = Vec::new();
    for factor in text.split('*') {
        let f = factor.trim();
        if let Some(inner) = f.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let (g, h) = inner.split_once(',').ok_or("commutator needs two entries")?;
            let (g, h) = (gen(g)?, gen(h)?);
            word.extend([(g, -1), (h, -1), (g, 1), (h, 1)]);
        } else if let Some((base, exp)) = f.split_once('^') {
            let g = gen(base)?;
            if let Ok(e) = exp.trim().parse::<i64>() {
                let sign = if e < 0 { -1 } else { 1 };
                word.extend(std::iter::repeat_n((g, sign), e.unsigned_abs() as usize));
            } else {
                let h = gen(exp)?;
                word.extend([(h, -1), (g, 1), (h, 1)]);
            }
        } else {
            word.push((gen(f)?, 1));
        }
    }
    Ok(word)
}

/// Parses presentation text and checks the generator list matches the level.
pub fn parse(text: &str) -> Result<Presentation, GroupError> {
    let mut k = None;
    let mut generators: Option<Vec<String>> = None;
    let mut relations = Vec::new();
    let mut relation_text = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let err = |m: String| GroupError::Parse(format!("line {}: {m}", lineno + 1));
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        match key {
            "level" => k = Some(rest.trim().parse::<u32>().map_err(|e| err(e.to_string()))?),
            "generators" => generators = Some(rest.split_whitespace().map(str::to_string).collect()),
            "relation" => {
                let names = generators.as_ref().ok_or_else(|| err("relation before generators".into()))?;
                let (l, r) = rest.split_once('=').ok_or_else(|| err("relation needs '='".into()))?;
                relations.push((parse_word(l, names).map_err(&err)?, parse_word(r, names).map_err(&err)?));
                relation_text.push(rest.trim().to_string());
            }
            other => return Err(err(format!("unknown directive {other:?}"))),
        }
    }
    let k = k.ok_or_else(|| GroupError::Parse("missing level".into()))?;
    let generators = generators.ok_or_else(|| GroupError::Parse("missing generators".into()))?;
    let ctx = GroupContext::new(k)?;
    if generators != generator_names(&ctx) {
        return Err(GroupError::Parse(format!("generator list does not match level {k}")));
    }
    Ok(Presentation { k, generators, relations, relation_text })
}

impl Presentation {
    pub fn context(&self) -> Result<GroupContext, GroupError> {
        GroupContext::new(self.k)
    }

    /// Engine value of each generator, in presentation order.
    pub fn generator_values(ctx: &GroupContext) -> Vec<Element> {
        let n = ctx.n;
        let mut v = vec![ctx.x()];
        v.extend((0..n).map(|i| ctx.y_i(i)));
        v.extend((0..ctx.d).map(|c| ctx.central(c)));
        v
    }

    pub fn evaluate(ctx: &GroupContext, values: &[Element], word: &Word) -> Element {
        let mut acc = ctx.identity();
        for &(g, e) in word {
            let v = if e > 0 { values[g] } else { ctx.inverse(&values[g]) };
            acc = ctx.mul(&acc, &v);
        }
        acc
    }

    /// Checks every relation in the engine; returns the first failing one.
    pub fn verify_in_engine(&self, ctx: &GroupContext) -> Result<(), String> {
        let values = Self::generator_values(ctx);
        for ((l, r), text) in self.relations.iter().zip(&self.relation_text) {
            if Self::evaluate(ctx, &values, l) != Self::evaluate(ctx, &values, r) {
                return Err(text.clone());
            }
        }
        Ok(())
    }

    /// Relators `l r^{-1}` for coset enumeration.
    pub fn relators(&self) -> Vec<Word> {
        self.relations
            .iter()
            .map(|(l, r)| {
                let mut w = l.clone();
                w.extend(r.iter().rev().map(|&(g, e)| (g, -e)));
                w
            })
            .filter(|w| !w.is_empty())
            .collect()
    }

    /// Normal-form word `x^t y^a z` of an element.
    pub fn normal_word(ctx: &GroupContext, g: &Element) -> Word {
        let n = ctx.n;
        let mut w: Word = std::iter::repeat_n((0, 1), g.t as usize).collect();
        w.extend((0..n).filter(|i| (g.a >> i) & 1 == 1).map(|i| (1 + i, 1)));
        w.extend(g.z.ones().map(|c| (1 + n + c, 1)));
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_counts() {
        for (k, count) in [(1, 6), (2, 15)] {
            let ctx = GroupContext::new(k).unwrap();
            let p = parse(&export(&ctx)).unwrap();
            assert_eq!(p.generators.len(), count);
            assert_eq!(p.k, k);
        }
    }

    #[test]
    fn relations_hold_in_engine() {
        for k in 1..=3 {
            let ctx = GroupContext::new(k).unwrap();
            let p = parse(&export(&ctx)).unwrap();
            p.verify_in_engine(&ctx).unwrap();
        }
    }

    #[test]
    fn parse_errors() {
        assert!(parse("generators x\nrelation x^2 = 1\n").is_err());
        assert!(parse("level 1\nrelation x = 1\n").is_err());
        assert!(parse("level 1\ngenerators x y0\n").is_err());
        let ctx = GroupContext::new(1).unwrap();
        let text = export(&ctx).replace("y0^2 = s0", "y0^2 = q0");
        assert!(parse(&text).unwrap_err().to_string().contains("unknown generator"));
    }

    #[test]
    fn word_forms() {
        let names: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        assert_eq!(parse_word("a^-2", &names).unwrap(), vec![(0, -1), (0, -1)]);
        assert_eq!(parse_word("a^b", &names).unwrap(), vec![(1, -1), (0, 1), (1, 1)]);
        assert_eq!(parse_word("[a,b] * b", &names).unwrap().len(), 5);
        assert!(parse_word("1", &names).unwrap().is_empty());
    }
}
