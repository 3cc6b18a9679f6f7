//! The named commutators `c_i`, `c_{i,j}` and `z_{i,j}`.

use std::collections::HashMap;

use crate::context::GroupContext;
use crate::element::Element;
use crate::error::GroupError;

/// `C(i) = [y, x, …(i-1)…, x]`, `CIJ(i, j) = [c_i, y, x, …(j-1)…, x]`,
/// `ZIJ(i, j) = [c_i, c_j]`. All indices start at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedCommutator {
    C(usize),
    CIJ(usize, usize),
    ZIJ(usize, usize),
}

pub fn resolve(spec: NamedCommutator, ctx: &GroupContext) -> Result<Element, GroupError> {
    Commutators::new(ctx).try_get(spec)
}

/// Memoizing evaluator for named commutators in one context.
pub struct Commutators {
    ctx: GroupContext,
    c: Vec<Element>,
    cij: HashMap<(usize, usize), Element>,
}

impl Commutators {
    pub fn new(ctx: &GroupContext) -> Self {
        Commutators { ctx: ctx.clone(), c: vec![ctx.y()], cij: HashMap::new() }
    }

    pub fn context(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn try_get(&mut self, spec: NamedCommutator) -> Result<Element, GroupError> {
        let bad = |s: NamedCommutator| GroupError::InvalidIndex(format!("{s:?}: indices start at 1"));
        match spec {
            NamedCommutator::C(i) if i >= 1 => Ok(self.c(i)),
            NamedCommutator::CIJ(i, j) if i >= 1 && j >= 1 => Ok(self.cij(i, j)),
            NamedCommutator::ZIJ(i, j) if i >= 1 && j >= 1 => Ok(self.z(i, j)),
            s => Err(bad(s)),
        }
    }

    /// `c_i`, `i >= 1`.
    pub fn c(&mut self, i: usize) -> Element {
        assert!(i >= 1, "c_i needs i >= 1");
        let x = self.ctx.x();
        while self.c.len() < i {
            let last = *self.c.last().unwrap();
            self.c.push(self.ctx.comm(&last, &x));
        }
        self.c[i - 1]
    }

    /// `c_i^2`.
    pub fn c_sq(&mut self, i: usize) -> Element {
        let c = self.c(i);
        self.ctx.mul(&c, &c)
    }

    /// `c_{i,j}`, `i, j >= 1`.
    pub fn cij(&mut self, i: usize, j: usize) -> Element {
        assert!(i >= 1 && j >= 1, "c_ij needs i, j >= 1");
        if let Some(v) = self.cij.get(&(i, j)) {
            return *v;
        }
        let v = if j == 1 {
            let ci = self.c(i);
            self.ctx.comm(&ci, &self.ctx.y())
        } else {
            let prev = self.cij(i, j - 1);
            self.ctx.comm(&prev, &self.ctx.x())
        };
        self.cij.insert((i, j), v);
        v
    }

    /// `z_{i,j} = [c_i, c_j]`.
    pub fn z(&mut self, i: usize, j: usize) -> Element {
        let (ci, cj) = (self.c(i), self.c(j));
        self.ctx.comm(&ci, &cj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c1_is_y_and_chain() {
        let ctx = GroupContext::new(2).unwrap();
        assert_eq!(resolve(NamedCommutator::C(1), &ctx).unwrap(), ctx.y());
        let c3 = resolve(NamedCommutator::C(3), &ctx).unwrap();
        let direct = ctx.comm_chain(&[ctx.y(), ctx.x(), ctx.x()]);
        assert_eq!(c3, direct);
        assert!(resolve(NamedCommutator::C(0), &ctx).is_err());
        assert!(resolve(NamedCommutator::ZIJ(0, 2), &ctx).is_err());
    }

    #[test]
    fn z_symmetric_and_central() {
        let ctx = GroupContext::new(3).unwrap();
        let mut cs = Commutators::new(&ctx);
        for i in 1..=10 {
            for j in 1..=10 {
                let zij = cs.z(i, j);
                let zji = cs.z(j, i);
                assert_eq!(zij, zji);
                assert!(ctx.mul(&zij, &zji).is_identity());
                assert!(zij.in_center());
            }
        }
    }

    #[test]
    fn cij_definition() {
        let ctx = GroupContext::new(2).unwrap();
        let mut cs = Commutators::new(&ctx);
        let c2 = cs.c(2);
        let expect = ctx.comm_chain(&[c2, ctx.y(), ctx.x(), ctx.x()]);
        assert_eq!(cs.cij(2, 3), expect);
    }
}
