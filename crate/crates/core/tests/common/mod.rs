#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_rational::Ratio;
use origami_kz::Origami;
use proptest::prelude::*;

pub const L_SHAPE: &str = "h=(1 2)(3); v=(1 3)(2)";

/// Quaternion group surface: squares are the elements of Q8 and
/// `h`, `v` are right multiplication by `i` and `j`.
pub fn quaternion() -> Origami {
    // Units 1, i, j, k as 0..4; element (sign, unit).
    const TABLE: [[(i8, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    let element = |k: usize| (if k < 4 { 1i8 } else { -1 }, k % 4);
    let index = |(s, u): (i8, usize)| u + if s < 0 { 4 } else { 0 };
    let times = |k: usize, unit: usize| {
        let (s, u) = element(k);
        let (t, w) = TABLE[u][unit];
        index((s * t, w)) as u32
    };
    let h = (0..8).map(|k| times(k, 1)).collect();
    let v = (0..8).map(|k| times(k, 2)).collect();
    Origami::from_images(h, v).unwrap()
}

pub type Pair = (Vec<usize>, Vec<usize>);

pub fn pair(o: &Origami) -> Pair {
    let f = |p: &[u32]| p.iter().map(|&x| x as usize).collect();
    (f(o.h().images()), f(o.v().images()))
}

pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    // First p, then q.
    p.iter().map(|&i| q[i]).collect()
}

pub fn inverse(p: &[usize]) -> Vec<usize> {
    let mut r = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        r[x] = i;
    }
    r
}

pub fn cycles(p: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut c = Vec::new();
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            c.push(i);
            i = p[i];
        }
        out.push(c);
    }
    out
}

pub fn transitive(h: &[usize], v: &[usize]) -> bool {
    let mut seen = vec![false; h.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in [h[i], v[i]] {
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.iter().all(|&s| s)
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap(n, &mut cur, &mut out);
    out
}

fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k - 1 {
        heap(k - 1, a, out);
        if k.is_multiple_of(2) {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
    heap(k - 1, a, out);
}

/// Least interleaved key `(h0, v0, h1, v1, ..)` over all `n!` relabelings.
pub fn brute_canonical(p: &Pair) -> Vec<usize> {
    let n = p.0.len();
    permutations(n)
        .into_iter()
        .map(|s| {
            let si = inverse(&s);
            let mut key = Vec::with_capacity(2 * n);
            for i in 0..n {
                key.push(s[p.0[si[i]]]);
                key.push(s[p.1[si[i]]]);
            }
            key
        })
        .min()
        .unwrap()
}

pub fn key_of(o: &Origami) -> Vec<usize> {
    let (h, v) = pair(o);
    h.iter().zip(&v).flat_map(|(&a, &b)| [a, b]).collect()
}

/// Orbit of the shears `(h, v h^-1)` and `(h v^-1, v)` and their inverses,
/// up to relabeling.
pub fn brute_orbit(p: &Pair) -> Vec<Pair> {
    let moves = |(h, v): &Pair| -> [Pair; 4] {
        let (hi, vi) = (inverse(h), inverse(v));
        [
            (h.clone(), compose(&hi, v)),
            (h.clone(), compose(h, v)),
            (compose(&vi, h), v.clone()),
            (compose(v, h), v.clone()),
        ]
    };
    let unkey = |k: &[usize]| -> Pair {
        (k.iter().step_by(2).copied().collect(), k.iter().skip(1).step_by(2).copied().collect())
    };
    let start = brute_canonical(p);
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(k) = queue.pop_front() {
        for m in moves(&unkey(&k)) {
            let c = brute_canonical(&m);
            if seen.insert(c.clone()) {
                queue.push_back(c);
            }
        }
    }
    seen.iter().map(|k| unkey(k)).collect()
}

/// Sum of `height / width` over horizontal cylinders, with rows glued when
/// `v` commutes with `h` along the lower one.
pub fn brute_cylinder_sum((h, v): &Pair) -> Ratio<i64> {
    let rows = cycles(h);
    let mut row_of = vec![0; h.len()];
    for (r, c) in rows.iter().enumerate() {
        for &i in c {
            row_of[i] = r;
        }
    }
    let mut parent: Vec<usize> = (0..rows.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for (r, c) in rows.iter().enumerate() {
        if c.iter().all(|&i| v[h[i]] == h[v[i]]) {
            let a = find(&mut parent, r);
            let b = find(&mut parent, row_of[v[c[0]]]);
            parent[a] = b;
        }
    }
    let mut heights: HashMap<usize, (i64, i64)> = HashMap::new();
    for (r, c) in rows.iter().enumerate() {
        let root = find(&mut parent, r);
        let e = heights.entry(root).or_insert((0, c.len() as i64));
        e.0 += 1;
    }
    heights.values().map(|&(ht, w)| Ratio::new(ht, w)).sum()
}

/// Orders of the zeros, from the cycle lengths of the commutator.
pub fn brute_kappa((h, v): &Pair) -> Vec<u32> {
    let comm = compose(&compose(&compose(&inverse(v), &inverse(h)), v), h);
    let mut k: Vec<u32> = cycles(&comm).iter().filter(|c| c.len() > 1).map(|c| c.len() as u32 - 1).collect();
    k.sort_unstable_by(|a, b| b.cmp(a));
    k
}

pub fn brute_exact_sum(p: &Pair) -> (Ratio<i64>, usize) {
    let orbit = brute_orbit(p);
    let stratum: Ratio<i64> =
        brute_kappa(p).iter().map(|&m| Ratio::new((m * (m + 2)) as i64, 12 * (m + 1) as i64)).sum();
    let cyl: Ratio<i64> = orbit.iter().map(brute_cylinder_sum).sum();
    (stratum + cyl / orbit.len() as i64, orbit.len())
}

/// Gaussian lattice of all absolute periods: develop the squares along a
/// spanning tree and collect the mismatch of every gluing.
pub fn brute_periods((h, v): &Pair) -> Vec<(i64, i64)> {
    let n = h.len();
    let mut pos: Vec<Option<(i64, i64)>> = vec![None; n];
    pos[0] = Some((0, 0));
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        let (x, y) = pos[i].unwrap();
        for (j, d) in [(h[i], (1, 0)), (v[i], (0, 1)), (inverse(h)[i], (-1, 0)), (inverse(v)[i], (0, -1))] {
            if pos[j].is_none() {
                pos[j] = Some((x + d.0, y + d.1));
                queue.push_back(j);
            }
        }
    }
    let mut out = Vec::new();
    for i in 0..n {
        let (x, y) = pos[i].unwrap();
        let (a, b) = pos[h[i]].unwrap();
        out.push((x + 1 - a, y - b));
        let (a, b) = pos[v[i]].unwrap();
        out.push((x - a, y + 1 - b));
    }
    out.retain(|&p| p != (0, 0));
    out
}

/// Covolume of the lattice spanned by `vs`: the gcd of all 2x2 minors.
pub fn brute_covolume(vs: &[(i64, i64)]) -> i64 {
    let mut g = 0i64;
    for (i, a) in vs.iter().enumerate() {
        for b in &vs[i + 1..] {
            g = num_integer::gcd(g, a.0 * b.1 - a.1 * b.0);
        }
    }
    g
}

/// Random connected surfaces with `lo..=hi` squares.
pub fn arb_origami(lo: usize, hi: usize) -> impl Strategy<Value = Origami> {
    (lo..=hi)
        .prop_flat_map(|n| {
            let perm = Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle();
            (perm.clone(), perm)
        })
        .prop_filter("connected", |(h, v)| {
            let f = |p: &[u32]| p.iter().map(|&x| x as usize).collect::<Vec<_>>();
            transitive(&f(h), &f(v))
        })
        .prop_map(|(h, v)| Origami::from_images(h, v).unwrap())
}
