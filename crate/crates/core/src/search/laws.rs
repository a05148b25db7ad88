//! Equational laws checked against partially filled Cayley tables.
//!
//! After a cell `(r, c)` is assigned, only instances of a law in which some
//! product node evaluates exactly `r·c` can have become fully determined. For
//! each product node the checker solves "left operand = r, right operand = c"
//! backwards through the table's partial inverses, binds the remaining free
//! variables by enumeration, and compares both sides where both are defined.

use super::partial::PartialTable;

const FREE: u8 = u8::MAX;

#[derive(Debug, Clone, Copy)]
enum Node {
    Var(u8),
    Mul(u8, u8),
}

/// `lhs = rhs` over at most three variables.
#[derive(Debug, Clone)]
pub(crate) struct Law {
    nodes: Vec<Node>,
    // bitmask of variables occurring below each node
    vars: Vec<u8>,
    lhs: u8,
    rhs: u8,
    arity: usize,
}

/// Small builder so laws read like their equations.
struct Builder {
    nodes: Vec<Node>,
    vars: Vec<u8>,
}

impl Builder {
    fn var(&mut self, v: u8) -> u8 {
        self.nodes.push(Node::Var(v));
        self.vars.push(1 << v);
        (self.nodes.len() - 1) as u8
    }

    fn mul(&mut self, a: u8, b: u8) -> u8 {
        self.nodes.push(Node::Mul(a, b));
        self.vars.push(self.vars[a as usize] | self.vars[b as usize]);
        (self.nodes.len() - 1) as u8
    }
}

impl Law {
    fn build(arity: usize, f: impl FnOnce(&mut Builder) -> (u8, u8)) -> Law {
        let mut b = Builder {
            nodes: Vec::new(),
            vars: Vec::new(),
        };
        let (lhs, rhs) = f(&mut b);
        Law {
            nodes: b.nodes,
            vars: b.vars,
            lhs,
            rhs,
            arity,
        }
    }

    /// `(x·y)·z = x·(y·z)`
    pub(crate) fn associativity() -> Law {
        Law::build(3, |b| {
            let (x, y, z) = (b.var(0), b.var(1), b.var(2));
            let xy = b.mul(x, y);
            let lhs = b.mul(xy, z);
            let (x, y, z) = (b.var(0), b.var(1), b.var(2));
            let yz = b.mul(y, z);
            let rhs = b.mul(x, yz);
            (lhs, rhs)
        })
    }

    /// `x·(y·(x·z)) = (x·(y·x))·z`
    pub(crate) fn left_bol() -> Law {
        Law::build(3, |b| {
            let (x, y, z) = (b.var(0), b.var(1), b.var(2));
            let xz = b.mul(x, z);
            let y_xz = b.mul(y, xz);
            let lhs = b.mul(x, y_xz);
            let (x, y, z) = (b.var(0), b.var(1), b.var(2));
            let yx = b.mul(y, x);
            let x_yx = b.mul(x, yx);
            let rhs = b.mul(x_yx, z);
            (lhs, rhs)
        })
    }

    /// `((z·x)·y)·x = z·((x·y)·x)`
    pub(crate) fn right_bol() -> Law {
        Law::build(3, |b| {
            let (x, y, z) = (b.var(0), b.var(1), b.var(2));
            let zx = b.mul(z, x);
            let zx_y = b.mul(zx, y);
            let x2 = b.var(0);
            let lhs = b.mul(zx_y, x2);
            let (x, y, z) = (b.var(0), b.var(1), b.var(2));
            let xy = b.mul(x, y);
            let xy_x = b.mul(xy, x);
            let rhs = b.mul(z, xy_x);
            (lhs, rhs)
        })
    }

    fn eval(&self, node: u8, env: &[u8; 3], t: &PartialTable) -> Option<u8> {
        match self.nodes[node as usize] {
            Node::Var(v) => Some(env[v as usize]),
            Node::Mul(a, b) => {
                let u = self.eval(a, env, t)?;
                let w = self.eval(b, env, t)?;
                t.get(u as usize, w as usize)
            }
        }
    }

    fn bound(&self, node: u8, env: &[u8; 3]) -> bool {
        let mask = self.vars[node as usize];
        (0..3).all(|v| mask & (1 << v) == 0 || env[v] != FREE)
    }

    /// Does some instance of the law that uses the product `r·c` fail on
    /// the current partial table?
    pub(crate) fn violated_through(&self, t: &PartialTable, r: usize, c: usize) -> bool {
        let mut env = [FREE; 3];
        for node in &self.nodes {
            if let Node::Mul(a, b) = *node {
                let hit = self.solve(a, r as u8, &mut env, t, &mut |env| {
                    self.solve(b, c as u8, env, t, &mut |env| self.complete(env, 0, t))
                });
                if hit {
                    return true;
                }
            }
        }
        false
    }

    /// Enumerates bindings of the variables under `node` that make it
    /// evaluate to `target`, calling `k` for each. Stops early when `k`
    /// reports a violation.
    fn solve(
        &self,
        node: u8,
        target: u8,
        env: &mut [u8; 3],
        t: &PartialTable,
        k: &mut dyn FnMut(&mut [u8; 3]) -> bool,
    ) -> bool {
        match self.nodes[node as usize] {
            Node::Var(v) => {
                let v = v as usize;
                if env[v] != FREE {
                    return env[v] == target && k(env);
                }
                env[v] = target;
                let hit = k(env);
                env[v] = FREE;
                hit
            }
            Node::Mul(a, b) => {
                if self.bound(a, env) {
                    let Some(u) = self.eval(a, env, t) else {
                        return false;
                    };
                    match t.solve_right(u as usize, target as usize) {
                        Some(w) => self.solve(b, w, env, t, k),
                        None => false,
                    }
                } else if self.bound(b, env) {
                    let Some(w) = self.eval(b, env, t) else {
                        return false;
                    };
                    match t.solve_left(w as usize, target as usize) {
                        Some(u) => self.solve(a, u, env, t, k),
                        None => false,
                    }
                } else {
                    for u in 0..t.order() {
                        if let Some(w) = t.solve_right(u, target as usize) {
                            let hit = self.solve(a, u as u8, env, t, &mut |env| self.solve(b, w, env, t, k));
                            if hit {
                                return true;
                            }
                        }
                    }
                    false
                }
            }
        }
    }

    fn complete(&self, env: &mut [u8; 3], from: usize, t: &PartialTable) -> bool {
        if from == self.arity {
            return match (self.eval(self.lhs, env, t), self.eval(self.rhs, env, t)) {
                (Some(l), Some(r)) => l != r,
                _ => false,
            };
        }
        if env[from] != FREE {
            return self.complete(env, from + 1, t);
        }
        for v in 0..t.order() {
            env[from] = v as u8;
            if self.complete(env, from + 1, t) {
                env[from] = FREE;
                return true;
            }
        }
        env[from] = FREE;
        false
    }

    /// Full check of every instance; used as a safety net on complete
    /// tables.
    pub(crate) fn holds_everywhere(&self, t: &PartialTable) -> bool {
        let mut env = [FREE; 3];
        !self.complete(&mut env, 0, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, symmetric3};

    fn full(l: &crate::LoopTable) -> PartialTable {
        let mut t = PartialTable::new(l.order());
        for i in 1..l.order() {
            for j in 1..l.order() {
                t.assign(i, j, l.cell(i, j) as u8);
            }
        }
        t
    }

    #[test]
    fn groups_satisfy_all_laws() {
        for g in [cyclic(5), symmetric3()] {
            let t = full(&g);
            for law in [Law::associativity(), Law::left_bol(), Law::right_bol()] {
                assert!(law.holds_everywhere(&t));
                for i in 0..g.order() {
                    for j in 0..g.order() {
                        assert!(!law.violated_through(&t, i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn detects_violation_through_last_cell() {
        // Order-5 loop that is not associative.
        let l = crate::LoopTable::from_rows(&[
            [0, 1, 2, 3, 4],
            [1, 2, 0, 4, 3],
            [2, 4, 3, 0, 1],
            [3, 0, 4, 1, 2],
            [4, 3, 1, 2, 0],
        ])
        .unwrap();
        let t = full(&l);
        let law = Law::associativity();
        assert!(!law.holds_everywhere(&t));
        // Some cell must expose the violation.
        let exposed = (1..5).any(|i| (1..5).any(|j| law.violated_through(&t, i, j)));
        assert!(exposed);
    }
}
