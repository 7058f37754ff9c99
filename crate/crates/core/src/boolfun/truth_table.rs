//! Truth tables over at most six variables, packed into a `u64`.
//! Bit `i` holds the value at the assignment where the k-th registered
//! variable takes bit k of `i`.

use super::{BoolAlgebra, UnknownVariable};
use crate::term::{Var, VarSet};

#[derive(Clone, Debug)]
pub struct TruthTable {
    vars: Vec<Var>,
}

impl TruthTable {
    pub fn new(vars: &[Var]) -> Self {
        assert!(vars.len() <= 6, "truth tables hold at most six variables");
        TruthTable {
            vars: vars.to_vec(),
        }
    }

    fn rows(&self) -> u32 {
        1 << self.vars.len()
    }

    fn full(&self) -> u64 {
        if self.rows() == 64 {
            u64::MAX
        } else {
            (1u64 << self.rows()) - 1
        }
    }

    fn index(&self, v: Var) -> Result<usize, UnknownVariable> {
        self.vars.iter().position(|&w| w == v).ok_or(UnknownVariable(v))
    }

    fn map_rows(&self, f: impl Fn(u32) -> bool) -> u64 {
        (0..self.rows()).filter(|&i| f(i)).fold(0, |acc, i| acc | 1 << i)
    }

    fn bit(f: u64, i: u32) -> bool {
        f >> i & 1 == 1
    }
}

impl BoolAlgebra for TruthTable {
    type F = u64;

    fn top(&mut self) -> u64 {
        self.full()
    }

    fn bot(&mut self) -> u64 {
        0
    }

    fn var(&mut self, v: Var) -> Result<u64, UnknownVariable> {
        let k = self.index(v)?;
        Ok(self.map_rows(|i| i >> k & 1 == 1))
    }

    fn and(&mut self, f: u64, g: u64) -> u64 {
        f & g
    }

    fn or(&mut self, f: u64, g: u64) -> u64 {
        f | g
    }

    fn not(&mut self, f: u64) -> u64 {
        !f & self.full()
    }

    fn restrict(&mut self, f: u64, v: Var, c: bool) -> Result<u64, UnknownVariable> {
        let k = self.index(v)?;
        Ok(self.map_rows(|i| {
            let j = if c { i | 1 << k } else { i & !(1 << k) };
            Self::bit(f, j)
        }))
    }

    fn rename(&mut self, f: u64, from: Var, to: Var) -> Result<u64, UnknownVariable> {
        let a = self.index(from)?;
        let b = self.index(to)?;
        Ok(self.map_rows(|i| {
            let j = if i >> b & 1 == 1 { i | 1 << a } else { i & !(1 << a) };
            Self::bit(f, j)
        }))
    }

    fn exists(&mut self, v: Var, f: u64) -> Result<u64, UnknownVariable> {
        let lo = self.restrict(f, v, false)?;
        let hi = self.restrict(f, v, true)?;
        Ok(lo | hi)
    }

    fn eval(&self, f: u64, assignment: &dyn Fn(Var) -> bool) -> bool {
        let i = self
            .vars
            .iter()
            .enumerate()
            .filter(|(_, &v)| assignment(v))
            .fold(0u32, |acc, (k, _)| acc | 1 << k);
        Self::bit(f, i)
    }

    fn entails(&mut self, f: u64, g: u64) -> bool {
        f & !g == 0
    }

    fn is_pos(&self, f: u64) -> bool {
        Self::bit(f, self.rows() - 1)
    }

    fn pos_part(&mut self, f: u64, vi: &VarSet) -> Result<u64, UnknownVariable> {
        let all = self.conj_vars(vi)?;
        Ok(f | all)
    }

    fn true_set(&mut self, f: u64, vi: &VarSet) -> VarSet {
        vi.iter()
            .copied()
            .filter(|&v| match self.var(v) {
                Ok(x) => f & !x == 0,
                Err(_) => f == 0,
            })
            .collect()
    }

    fn false_set(&mut self, f: u64, vi: &VarSet) -> VarSet {
        vi.iter()
            .copied()
            .filter(|&v| match self.var(v) {
                Ok(x) => f & x == 0,
                Err(_) => f == 0,
            })
            .collect()
    }
}
