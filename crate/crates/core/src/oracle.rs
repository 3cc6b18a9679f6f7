//! Todd–Coxeter coset enumeration over the exported presentation, used as an
//! engine-independent multiplication oracle at small levels.

use std::collections::HashMap;

use crate::context::GroupContext;
use crate::element::Element;
use crate::error::GroupError;
use crate::presentation::{Presentation, Word};

/// Complete coset table of the trivial subgroup (the regular action).
pub struct CosetTable {
    /// `table[c][2g]` is `c·g`, `table[c][2g+1]` is `c·g^{-1}`.
    pub table: Vec<Vec<usize>>,
    pub generators: usize,
}

struct Enumerator {
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    cols: usize,
    limit: usize,
}

fn col(letter: (usize, i8)) -> usize {
    2 * letter.0 + usize::from(letter.1 < 0)
}

impl Enumerator {
    fn rep(&mut self, mut c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[c] != root {
            let next = self.parent[c];
            self.parent[c] = root;
            c = next;
        }
        root
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), GroupError> {
        if self.table.len() >= self.limit {
            return Err(GroupError::InvalidSubgroup(format!("coset limit {} exceeded", self.limit)));
        }
        let d = self.table.len();
        self.table.push(vec![None; self.cols]);
        self.parent.push(d);
        self.table[c][x] = Some(d);
        self.table[d][x ^ 1] = Some(c);
        Ok(())
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.parent[hi] = lo;
        queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.cols {
                let Some(f) = self.table[e][x] else { continue };
                self.table[f][x ^ 1] = None;
                let (e1, f1) = (self.rep(e), self.rep(f));
                if let Some(g) = self.table[e1][x] {
                    self.merge(f1, g, &mut queue);
                } else if let Some(g) = self.table[f1][x ^ 1] {
                    self.merge(e1, g, &mut queue);
                } else {
                    self.table[e1][x] = Some(f1);
                    self.table[f1][x ^ 1] = Some(e1);
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<(), GroupError> {
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len());
        loop {
            while i < j {
                match self.table[f][w[i]] {
                    Some(next) => {
                        f = next;
                        i += 1;
                    }
                    None => break,
                }
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                match self.table[b][w[j - 1] ^ 1] {
                    Some(next) => {
                        b = next;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.table[f][w[i]] = Some(b);
                self.table[b][w[i] ^ 1] = Some(f);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }
}

/// HLT enumeration of the cosets of the trivial subgroup.
pub fn enumerate(generators: usize, relators: &[Word], limit: usize) -> Result<CosetTable, GroupError> {
    let cols = 2 * generators;
    let rels: Vec<Vec<usize>> = relators.iter().map(|r| r.iter().map(|&l| col(l)).collect()).collect();
    let mut en = Enumerator { table: vec![vec![None; cols]], parent: vec![0], cols, limit };
    let mut c = 0;
    while c < en.table.len() {
        for r in &rels {
            if !en.live(c) {
                break;
            }
            en.scan_and_fill(c, r)?;
        }
        if en.live(c) {
            for x in 0..cols {
                if en.table[c][x].is_none() {
                    en.define(c, x)?;
                }
            }
        }
        c += 1;
    }
    let live: Vec<usize> = (0..en.table.len()).filter(|&c| en.live(c)).collect();
    let index: HashMap<usize, usize> = live.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut table = Vec::with_capacity(live.len());
    for &c in &live {
        let mut row = Vec::with_capacity(cols);
        for x in 0..cols {
            let target = en.table[c][x].ok_or_else(|| GroupError::InvalidSubgroup("incomplete coset table".into()))?;
            let target = en.rep(target);
            row.push(index[&target]);
        }
        table.push(row);
    }
    Ok(CosetTable { table, generators })
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn act(&self, mut c: usize, word: &Word) -> usize {
        for &l in word {
            c = self.table[c][col(l)];
        }
        c
    }
}

/// Outcome of comparing the engine against the enumerated table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub k: u32,
    pub cosets: usize,
    pub engine_order: u64,
    pub products_checked: u64,
    pub mismatches: u64,
    /// `order -> count`, ascending.
    pub order_census: Vec<(u64, u64)>,
    /// `|Z(G_k)|` read off the coset table.
    pub center_order: u64,
    pub engine_center_order: u64,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
            && self.cosets as u64 == self.engine_order
            && self.center_order == self.engine_center_order
    }
}

/// Runs the oracle at a level small enough to enumerate the whole group.
///
/// The coset map must be a bijection and intertwine right multiplication by
/// every presentation generator; at level 1 the full product table is also
/// compared.
pub fn run(ctx: &GroupContext) -> Result<OracleReport, GroupError> {
    if ctx.k > 2 {
        return Err(GroupError::UnsupportedExact { k: ctx.k });
    }
    let pres = crate::presentation::parse(&crate::presentation::export(ctx))?;
    let table = enumerate(pres.generators.len(), &pres.relators(), 1 << 22)?;
    let elements = all_elements(ctx);
    let engine_order = elements.len() as u64;
    let index: HashMap<Element, usize> = elements.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let coset_of: Vec<usize> =
        elements.iter().map(|g| table.act(0, &Presentation::normal_word(ctx, g))).collect();
    let mut mismatches = 0u64;
    let mut products = 0u64;
    let mut seen = vec![false; table.len()];
    for &c in &coset_of {
        if seen[c] {
            mismatches += 1;
        }
        seen[c] = true;
    }
    let gens = Presentation::generator_values(ctx);
    for (g, &cg) in elements.iter().zip(&coset_of) {
        for (s, v) in gens.iter().enumerate() {
            for (letter, h) in [((s, 1i8), *v), ((s, -1i8), ctx.inverse(v))] {
                let gh = ctx.mul(g, &h);
                if table.table[cg][col(letter)] != coset_of[index[&gh]] {
                    mismatches += 1;
                }
                products += 1;
            }
        }
    }
    if ctx.k == 1 {
        for (g, &cg) in elements.iter().zip(&coset_of) {
            for h in &elements {
                let gh = ctx.mul(g, h);
                if table.act(cg, &Presentation::normal_word(ctx, h)) != coset_of[index[&gh]] {
                    mismatches += 1;
                }
                products += 1;
            }
        }
    }
    let mut census: std::collections::BTreeMap<u64, u64> = Default::default();
    for g in &elements {
        *census.entry(ctx.order(g)).or_default() += 1;
    }
    let (x, y) = (ctx.x(), ctx.y());
    let engine_center_order = elements
        .iter()
        .filter(|g| ctx.mul(g, &x) == ctx.mul(&x, g) && ctx.mul(g, &y) == ctx.mul(&y, g))
        .count() as u64;
    // g is central iff g·s and s·g reach the same coset for s = x, y
    let words: Vec<Word> = elements.iter().map(|g| Presentation::normal_word(ctx, g)).collect();
    let center_order = (0..elements.len())
        .filter(|&e| {
            [0usize, 1].iter().all(|&s| {
                let cs = table.act(0, &vec![(s, 1i8)]);
                table.table[coset_of[e]][col((s, 1))] == table.act(cs, &words[e])
            })
        })
        .count() as u64;
    Ok(OracleReport {
        k: ctx.k,
        cosets: table.len(),
        engine_order,
        products_checked: products,
        mismatches,
        order_census: census.into_iter().collect(),
        center_order,
        engine_center_order,
    })
}

/// Every element of `G_k` in normal-form order; only sensible for `k <= 2`.
pub fn all_elements(ctx: &GroupContext) -> Vec<Element> {
    let n = ctx.n;
    let mut out = Vec::with_capacity(1usize << ctx.log_order());
    for t in 0..n as u32 {
        for a in 0..(1u32 << n) {
            for zi in 0..(1u64 << ctx.d) {
                let mut z = crate::bits::ZBits::default();
                for c in 0..ctx.d {
                    if (zi >> c) & 1 == 1 {
                        z.set(c);
                    }
                }
                out.push(ctx.element(t, a, z).expect("in range"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_of_order_eight() {
        // a^4 = b^2 = (ab)^2 = 1
        let rels: Vec<Word> = vec![vec![(0, 1); 4], vec![(1, 1); 2], vec![(0, 1), (1, 1), (0, 1), (1, 1)]];
        assert_eq!(enumerate(2, &rels, 1000).unwrap().len(), 8);
    }

    #[test]
    fn level_one_matches_engine() {
        let ctx = GroupContext::new(1).unwrap();
        let r = run(&ctx).unwrap();
        assert_eq!(r.cosets, 64);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.order_census.last().unwrap().0, 8);
    }

    #[test]
    fn level_two_matches_engine() {
        let ctx = GroupContext::new(2).unwrap();
        let r = run(&ctx).unwrap();
        assert_eq!(r.cosets, 1 << 16);
        assert!(r.passed(), "{r:?}");
        assert!(run(&GroupContext::new(3).unwrap()).is_err());
    }
}
