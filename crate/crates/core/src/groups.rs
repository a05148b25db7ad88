//! Small groups as loop tables, used as fixtures and as input to the
//! odd-order Bruck construction.

use crate::table::LoopTable;

/// The cyclic group `Z_n` with identity 0.
pub fn cyclic(n: usize) -> LoopTable {
    let rows: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    LoopTable::from_rows(&rows).expect("cyclic group table")
}

/// `Z_2 × Z_2`.
pub fn klein_four() -> LoopTable {
    direct_product(&cyclic(2), &cyclic(2))
}

/// The symmetric group on three points; element 0 is the identity.
pub fn symmetric3() -> LoopTable {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [1, 0, 2],
        [2, 1, 0],
        [0, 2, 1],
        [1, 2, 0],
        [2, 0, 1],
    ];
    let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    let rows: Vec<Vec<usize>> = perms
        .iter()
        .map(|a| {
            perms
                .iter()
                .map(|b| index([a[b[0]], a[b[1]], a[b[2]]]))
                .collect()
        })
        .collect();
    LoopTable::from_rows(&rows).expect("S3 table")
}

/// Direct product; the pair `(a, b)` is element `a * |B| + b`.
pub fn direct_product(a: &LoopTable, b: &LoopTable) -> LoopTable {
    let (na, nb) = (a.order(), b.order());
    let rows: Vec<Vec<usize>> = (0..na * nb)
        .map(|x| {
            (0..na * nb)
                .map(|y| a.cell(x / nb, y / nb) * nb + b.cell(x % nb, y % nb))
                .collect()
        })
        .collect();
    LoopTable::from_rows(&rows).expect("direct product of loops")
}

/// The metacyclic group `Z_p ⋊ Z_q` where the generator of `Z_q` acts by
/// multiplication by `r` (which must satisfy `r^q ≡ 1 mod p`).
/// `(a, b)` is element `b * p + a`.
pub fn metacyclic(p: usize, q: usize, r: usize) -> Option<LoopTable> {
    let pow = |e: usize| (0..e).fold(1usize, |acc, _| acc * r % p);
    if p == 0 || q == 0 || pow(q) != 1 % p {
        return None;
    }
    let n = p * q;
    let rows: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            let (a1, b1) = (x % p, x / p);
            (0..n)
                .map(|y| {
                    let (a2, b2) = (y % p, y / p);
                    let a = (a1 + pow(b1) * a2) % p;
                    let b = (b1 + b2) % q;
                    b * p + a
                })
                .collect()
        })
        .collect();
    LoopTable::from_rows(&rows).ok()
}

/// The nonabelian group of order 21, `Z_7 ⋊ Z_3`.
pub fn nonabelian21() -> LoopTable {
    metacyclic(7, 3, 2).expect("2^3 = 1 mod 7")
}

/// Looks up a group by a short name: `z<n>`, `klein4`, `s3`, `z7:z3`,
/// or `z<p>:z<q>:<r>` for a metacyclic group.
pub fn by_name(name: &str) -> Option<LoopTable> {
    match name {
        "klein4" | "v4" => return Some(klein_four()),
        "s3" => return Some(symmetric3()),
        "z7:z3" | "nonabelian21" => return Some(nonabelian21()),
        _ => {}
    }
    let parts: Vec<&str> = name.split(':').collect();
    let cyc = |s: &str| s.strip_prefix('z').and_then(|d| d.parse::<usize>().ok());
    match parts.as_slice() {
        [z] => cyc(z).filter(|&n| (1..=crate::MAX_ORDER).contains(&n)).map(cyclic),
        [zp, zq, r] => metacyclic(cyc(zp)?, cyc(zq)?, r.parse().ok()?),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Element;

    fn associative(l: &LoopTable) -> bool {
        let n = l.order();
        (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| l.cell(l.cell(x, y), z) == l.cell(x, l.cell(y, z)))))
    }

    #[test]
    fn fixtures_are_groups() {
        for g in [cyclic(1), cyclic(6), klein_four(), symmetric3(), nonabelian21()] {
            assert!(associative(&g));
            assert_eq!(g.identity(), Element::new(0));
        }
    }

    #[test]
    fn s3_and_order21_are_nonabelian() {
        for g in [symmetric3(), nonabelian21()] {
            let n = g.order();
            assert!((0..n).any(|x| (0..n).any(|y| g.cell(x, y) != g.cell(y, x))));
        }
    }

    #[test]
    fn names() {
        assert_eq!(by_name("z5"), Some(cyclic(5)));
        assert_eq!(by_name("z7:z3:2"), Some(nonabelian21()));
        assert_eq!(by_name("z7:z3:3"), None);
        assert_eq!(by_name("q8"), None);
    }
}
