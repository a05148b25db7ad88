//! Brute-force reference implementations used to cross-check the library.
#![allow(dead_code)]

use std::collections::BTreeSet;

use bolforge_core::search::ClassConstraint;
use bolforge_core::LoopTable;

pub type Table = Vec<Vec<usize>>;

/// Every Latin square with identity 0 (row 0 and column 0 in order).
pub fn all_loops(n: usize) -> Vec<Table> {
    fn go(t: &mut Table, pos: usize, n: usize, out: &mut Vec<Table>) {
        if pos == n * n {
            out.push(t.clone());
            return;
        }
        let (r, c) = (pos / n, pos % n);
        if r == 0 || c == 0 {
            t[r][c] = r.max(c);
            if (0..r).all(|i| t[i][c] != t[r][c]) && (0..c).all(|j| t[r][j] != t[r][c]) {
                go(t, pos + 1, n, out);
            }
            return;
        }
        for v in 0..n {
            if (0..r).all(|i| t[i][c] != v) && (0..c).all(|j| t[r][j] != v) {
                t[r][c] = v;
                go(t, pos + 1, n, out);
            }
        }
    }
    let mut out = Vec::new();
    go(&mut vec![vec![0; n]; n], 0, n, &mut out);
    out
}

pub fn table_of(l: &LoopTable) -> Table {
    let l = l.normalized();
    (0..l.order()).map(|i| (0..l.order()).map(|j| l.cell(i, j)).collect()).collect()
}

pub fn loop_of(t: &Table) -> LoopTable {
    LoopTable::from_rows(t).expect("oracle tables are loops")
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
}

pub fn associative(t: &Table) -> bool {
    triples(t.len()).all(|(x, y, z)| t[t[x][y]][z] == t[x][t[y][z]])
}

pub fn left_bol(t: &Table) -> bool {
    triples(t.len()).all(|(x, y, z)| t[x][t[y][t[x][z]]] == t[t[x][t[y][x]]][z])
}

pub fn right_bol(t: &Table) -> bool {
    triples(t.len()).all(|(x, y, z)| t[t[t[z][x]][y]][x] == t[z][t[t[x][y]][x]])
}

pub fn satisfies(t: &Table, class: ClassConstraint) -> bool {
    match class {
        ClassConstraint::None => true,
        ClassConstraint::LeftBol => left_bol(t),
        ClassConstraint::RightBol => right_bol(t),
        ClassConstraint::Moufang => left_bol(t) && right_bol(t),
        ClassConstraint::Associative => associative(t),
    }
}

/// Permutations of `1..n` with 0 fixed.
pub fn identity_fixing_perms(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, left: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..left.len() {
            let v = left.remove(i);
            cur.push(v);
            go(cur, left, out);
            cur.pop();
            left.insert(i, v);
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    go(&mut vec![0], &mut (1..n).collect(), &mut out);
    out
}

pub fn relabel(t: &Table, p: &[usize]) -> Table {
    let n = t.len();
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[p[i]][p[j]] = p[t[i][j]];
        }
    }
    out
}

/// Least relabeled table over every identity-fixing permutation.
pub fn brute_canonical(t: &Table, perms: &[Vec<usize>]) -> Table {
    perms.iter().map(|p| relabel(t, p)).min().expect("some permutation")
}

/// Isomorphism classes of order-`n` loops in `class`, as brute-force
/// canonical tables.
pub fn classes(n: usize, class: ClassConstraint, nonassociative: bool) -> BTreeSet<Table> {
    let perms = identity_fixing_perms(n);
    all_loops(n)
        .into_iter()
        .filter(|t| satisfies(t, class) && !(nonassociative && associative(t)))
        .map(|t| brute_canonical(&t, &perms))
        .collect()
}

pub fn commutant(t: &Table) -> Vec<usize> {
    let n = t.len();
    (0..n).filter(|&a| (0..n).all(|x| t[a][x] == t[x][a])).collect()
}

/// Closed under product and both divisions.
pub fn is_subloop(t: &Table, s: &[usize]) -> bool {
    let n = t.len();
    s.contains(&0)
        && s.iter().all(|&a| {
            s.iter().all(|&b| {
                let ld = (0..n).find(|&x| t[a][x] == b).unwrap();
                let rd = (0..n).find(|&y| t[y][b] == a).unwrap();
                s.contains(&t[a][b]) && s.contains(&ld) && s.contains(&rd)
            })
        })
}
