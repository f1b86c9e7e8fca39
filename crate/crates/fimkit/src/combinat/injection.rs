use super::perm::MultiPermutation;
use super::shape::Shape;
use crate::error::{FimError, Result};
use std::fmt;
use std::str::FromStr;

/// A morphism between shapes: one injective map `[n_i] -> [t_i]` per factor,
/// stored as 1-based image lists.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Injection {
    domain: Shape,
    codomain: Shape,
    images: Vec<Vec<usize>>,
}

impl Injection {
    pub fn new(domain: Shape, codomain: Shape, images: Vec<Vec<usize>>) -> Result<Self> {
        if domain.arity() != codomain.arity() || images.len() != domain.arity() {
            return Err(FimError::BadInjection(format!(
                "arity mismatch between {domain}, {codomain} and {} image lists",
                images.len()
            )));
        }
        for (i, imgs) in images.iter().enumerate() {
            let n = domain.entry(i);
            let t = codomain.entry(i);
            if imgs.len() != n {
                return Err(FimError::BadInjection(format!(
                    "factor {} has {} images, domain needs {n}",
                    i + 1,
                    imgs.len()
                )));
            }
            let mut seen = vec![false; t + 1];
            for &x in imgs {
                if x == 0 || x > t {
                    return Err(FimError::BadInjection(format!(
                        "factor {} image {x} outside 1..={t}",
                        i + 1
                    )));
                }
                if seen[x] {
                    return Err(FimError::BadInjection(format!(
                        "factor {} repeats image {x}",
                        i + 1
                    )));
                }
                seen[x] = true;
            }
        }
        Ok(Injection {
            domain,
            codomain,
            images,
        })
    }

    pub fn identity(shape: &Shape) -> Self {
        let images = shape.0.iter().map(|&n| (1..=n).collect()).collect();
        Injection {
            domain: shape.clone(),
            codomain: shape.clone(),
            images,
        }
    }

    /// The one-step inclusion in factor `i`: identity in other factors,
    /// `t -> t + 1` in factor `i`.
    pub fn step(domain: &Shape, i: usize) -> Self {
        let codomain = domain.plus_unit(i);
        let images = domain
            .0
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                if k == i {
                    (2..=n + 1).collect()
                } else {
                    (1..=n).collect()
                }
            })
            .collect();
        Injection {
            domain: domain.clone(),
            codomain,
            images,
        }
    }

    /// The staircase of one-step inclusions from `domain` up by `steps`,
    /// componentwise `s -> s + steps_i`.
    pub fn staircase(domain: &Shape, steps: &Shape) -> Self {
        let codomain = domain.plus(steps);
        let images = domain
            .0
            .iter()
            .zip(&steps.0)
            .map(|(&n, &k)| (k + 1..=k + n).collect())
            .collect();
        Injection {
            domain: domain.clone(),
            codomain,
            images,
        }
    }

    pub fn domain(&self) -> &Shape {
        &self.domain
    }

    pub fn codomain(&self) -> &Shape {
        &self.codomain
    }

    pub fn arity(&self) -> usize {
        self.domain.arity()
    }

    /// Image of `x` (1-based) under the factor-`i` map.
    pub fn apply(&self, i: usize, x: usize) -> usize {
        self.images[i][x - 1]
    }

    pub fn factor_images(&self, i: usize) -> &[usize] {
        &self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.domain == self.codomain
            && self
                .images
                .iter()
                .all(|imgs| imgs.iter().enumerate().all(|(k, &x)| x == k + 1))
    }

    /// Composition `self . inner` (apply `inner` first).
    pub fn compose(&self, inner: &Injection) -> Result<Injection> {
        if inner.codomain != self.domain {
            return Err(FimError::NotComposable {
                inner: inner.codomain.to_string(),
                outer: self.domain.to_string(),
            });
        }
        let images = self
            .images
            .iter()
            .zip(&inner.images)
            .map(|(outer, inner)| inner.iter().map(|&x| outer[x - 1]).collect())
            .collect();
        Ok(Injection {
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            images,
        })
    }

    /// The self-embedding in direction `i`: other factors unchanged; in
    /// factor `i` the new point 1 maps to 1 and old points shift up by one.
    pub fn self_embed(&self, i: usize) -> Injection {
        let mut images = self.images.clone();
        let mut col = Vec::with_capacity(self.domain.entry(i) + 1);
        col.push(1);
        col.extend(self.images[i].iter().map(|&x| x + 1));
        images[i] = col;
        Injection {
            domain: self.domain.plus_unit(i),
            codomain: self.codomain.plus_unit(i),
            images,
        }
    }

    /// Writes `self = sigma . staircase(domain, steps)` with `sigma` a
    /// permutation of the codomain: `sigma` acts as `self` on the shifted
    /// points and maps `1..=steps_i` order-preservingly onto the complement
    /// of the factor-`i` image. Returns `(sigma, steps)`.
    pub fn canonical_factorization(&self) -> (MultiPermutation, Shape) {
        let steps = self
            .codomain
            .minus(&self.domain)
            .expect("codomain dominates domain in a valid injection");
        let mut perms = Vec::with_capacity(self.arity());
        for i in 0..self.arity() {
            let n = self.domain.entry(i);
            let t = self.codomain.entry(i);
            let k = t - n;
            let mut perm = vec![0usize; t];
            let mut hit = vec![false; t + 1];
            for (s, &x) in self.images[i].iter().enumerate() {
                perm[k + s] = x;
                hit[x] = true;
            }
            let mut j = 0;
            for x in 1..=t {
                if !hit[x] {
                    perm[j] = x;
                    j += 1;
                }
            }
            debug_assert_eq!(j, k);
            perms.push(perm);
        }
        (
            MultiPermutation::from_images(self.codomain.clone(), perms)
                .expect("complement construction yields a permutation"),
            steps,
        )
    }
}

impl fmt::Display for Injection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, imgs) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (k, x) in imgs.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Injection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}->{}", self, self.domain, self.codomain)
    }
}

/// Parses the image-list encoding `[[..],[..]]` produced by `Display`.
/// The codomain is not part of the encoding, so parsing yields the image
/// lists; pair them with shapes via [`Injection::new`].
pub fn parse_image_lists(s: &str) -> Result<Vec<Vec<usize>>> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| FimError::Parse(format!("injection must look like [[..],[..]]: {s:?}")))?;
    let mut lists = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('[')
            .ok_or_else(|| FimError::Parse(format!("expected '[' in injection: {rest:?}")))?;
        let close = open
            .find(']')
            .ok_or_else(|| FimError::Parse(format!("missing ']' in injection: {s:?}")))?;
        let body = &open[..close];
        let mut list = Vec::new();
        for piece in body.split(',') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            list.push(
                piece
                    .parse::<usize>()
                    .map_err(|e| FimError::Parse(format!("bad image {piece:?}: {e}")))?,
            );
        }
        lists.push(list);
        rest = open[close + 1..].trim();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim();
        } else if !rest.is_empty() {
            return Err(FimError::Parse(format!(
                "expected ',' between factors in injection: {s:?}"
            )));
        }
    }
    if lists.is_empty() {
        return Err(FimError::Parse("injection needs at least one factor".into()));
    }
    Ok(lists)
}

impl FromStr for Injection {
    type Err = FimError;

    /// Parses an endomorphism-free standalone form used in tests:
    /// `[[..],[..]]@(dom)->(cod)`.
    fn from_str(s: &str) -> Result<Injection> {
        let (imgs, shapes) = s
            .split_once('@')
            .ok_or_else(|| FimError::Parse(format!("expected imgs@(dom)->(cod): {s:?}")))?;
        let (d, c) = shapes
            .split_once("->")
            .ok_or_else(|| FimError::Parse(format!("expected (dom)->(cod): {shapes:?}")))?;
        Injection::new(d.parse()?, c.parse()?, parse_image_lists(imgs)?)
    }
}

/// Number of injections between two shapes: product over factors of
/// `t_i! / (t_i - n_i)!`, and 0 unless the domain is below the codomain.
pub fn hom_size(domain: &Shape, codomain: &Shape) -> u128 {
    if !domain.leq(codomain) {
        return 0;
    }
    let mut total: u128 = 1;
    for (&n, &t) in domain.0.iter().zip(&codomain.0) {
        for f in (t - n + 1)..=t {
            total *= f as u128;
        }
    }
    total
}

fn injective_words(n: usize, t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; t + 1];
    fn rec(n: usize, t: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in 1..=t {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                rec(n, t, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    rec(n, t, &mut cur, &mut used, &mut out);
    out
}

fn increasing_words(n: usize, t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, t: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in start..=t {
            cur.push(x);
            rec(n, t, x + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, t, 1, &mut cur, &mut out);
    out
}

/// All injections whose image lists strictly increase in every factor, in
/// lexicographic order: canonical representatives of the orbits of
/// precomposition by domain permutations. Count is the product of binomial
/// coefficients C(t_i, n_i).
pub fn enumerate_monotone_injections(domain: &Shape, codomain: &Shape) -> Vec<Injection> {
    if !domain.leq(codomain) {
        return Vec::new();
    }
    let per_factor: Vec<Vec<Vec<usize>>> = domain
        .0
        .iter()
        .zip(&codomain.0)
        .map(|(&n, &t)| increasing_words(n, t))
        .collect();
    product_injections(domain, codomain, &per_factor)
}

/// Writes `f = mono ∘ perm` with `mono` the monotone injection having the
/// same image set and `perm` a permutation of the domain.
pub fn monotone_factorization(f: &Injection) -> (Injection, MultiPermutation) {
    let mut mono_images = Vec::with_capacity(f.arity());
    let mut perm_images = Vec::with_capacity(f.arity());
    for i in 0..f.arity() {
        let raw = f.factor_images(i);
        let mut sorted = raw.to_vec();
        sorted.sort_unstable();
        // perm sends s to the rank of raw[s] among the images
        let perm = raw
            .iter()
            .map(|x| sorted.binary_search(x).expect("image present") + 1)
            .collect();
        mono_images.push(sorted);
        perm_images.push(perm);
    }
    let mono = Injection::new(f.domain().clone(), f.codomain().clone(), mono_images)
        .expect("sorted images stay injective");
    let perm = MultiPermutation::from_images(f.domain().clone(), perm_images)
        .expect("ranks of distinct images form a permutation");
    (mono, perm)
}

fn product_injections(
    domain: &Shape,
    codomain: &Shape,
    per_factor: &[Vec<Vec<usize>>],
) -> Vec<Injection> {
    let mut out = Vec::new();
    let mut choice = vec![0usize; domain.arity()];
    loop {
        let images: Vec<Vec<usize>> = per_factor
            .iter()
            .zip(&choice)
            .map(|(opts, &c)| opts[c].clone())
            .collect();
        out.push(Injection {
            domain: domain.clone(),
            codomain: codomain.clone(),
            images,
        });
        let mut i = domain.arity();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < per_factor[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// All injections `domain -> codomain` in lexicographic order on the
/// concatenated image lists (factor 1 most significant). Empty when the
/// domain is not componentwise below the codomain.
pub fn enumerate_injections(domain: &Shape, codomain: &Shape) -> Vec<Injection> {
    if !domain.leq(codomain) {
        return Vec::new();
    }
    let per_factor: Vec<Vec<Vec<usize>>> = domain
        .0
        .iter()
        .zip(&codomain.0)
        .map(|(&n, &t)| injective_words(n, t))
        .collect();
    product_injections(domain, codomain, &per_factor)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sh(v: &[usize]) -> Shape {
        Shape::new(v.to_vec())
    }

    #[test]
    fn enumeration_counts_match_falling_factorials() {
        for n1 in 0..=3usize {
            for t1 in 0..=4usize {
                for n2 in 0..=2usize {
                    for t2 in 0..=3usize {
                        let d = sh(&[n1, n2]);
                        let c = sh(&[t1, t2]);
                        let all = enumerate_injections(&d, &c);
                        assert_eq!(all.len() as u128, hom_size(&d, &c), "{d} -> {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn monotone_enumeration_counts_binomials() {
        // C(4,2)*C(3,1) = 18
        let all = enumerate_monotone_injections(&sh(&[2, 1]), &sh(&[4, 3]));
        assert_eq!(all.len(), 18);
        for f in &all {
            for i in 0..2 {
                let imgs = f.factor_images(i);
                assert!(imgs.windows(2).all(|w| w[0] < w[1]), "{f:?} not sorted");
            }
        }
        assert!(enumerate_monotone_injections(&sh(&[3]), &sh(&[2])).is_empty());
    }

    #[test]
    fn monotone_factorization_round_trips() {
        let d = sh(&[2, 2]);
        let c = sh(&[3, 3]);
        for f in enumerate_injections(&d, &c) {
            let (mono, perm) = monotone_factorization(&f);
            for i in 0..2 {
                let imgs = mono.factor_images(i);
                assert!(imgs.windows(2).all(|w| w[0] < w[1]));
            }
            let rebuilt = mono.compose(&perm.as_injection()).unwrap();
            assert_eq!(rebuilt, f, "mono {mono:?} perm {perm:?}");
        }
        // a monotone injection factors trivially
        let g = Injection::new(sh(&[2]), sh(&[4]), vec![vec![2, 4]]).unwrap();
        let (mono, perm) = monotone_factorization(&g);
        assert_eq!(mono, g);
        assert!(perm.is_identity());
    }

    #[test]
    fn enumeration_is_lexicographic_and_duplicate_free() {
        let all = enumerate_injections(&sh(&[2, 1]), &sh(&[3, 2]));
        let keys: Vec<Vec<usize>> = all
            .iter()
            .map(|f| {
                let mut k = f.factor_images(0).to_vec();
                k.extend_from_slice(f.factor_images(1));
                k
            })
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn empty_hom_set_when_domain_not_below() {
        assert!(enumerate_injections(&sh(&[2, 0]), &sh(&[1, 3])).is_empty());
        assert_eq!(hom_size(&sh(&[2, 0]), &sh(&[1, 3])), 0);
    }

    #[test]
    fn composition_example() {
        let f = Injection::new(sh(&[1]), sh(&[2]), vec![vec![2]]).unwrap();
        let g = Injection::new(sh(&[2]), sh(&[3]), vec![vec![3, 1]]).unwrap();
        let gf = g.compose(&f).unwrap();
        assert_eq!(gf.factor_images(0), &[1]);
        assert!(g.compose(&g).is_err());
    }

    #[test]
    fn left_cancellation_exhaustive() {
        let d = sh(&[1, 1]);
        let mid = sh(&[2, 1]);
        let c = sh(&[3, 2]);
        let homs_dm = enumerate_injections(&d, &mid);
        let homs_mc = enumerate_injections(&mid, &c);
        for h in &homs_mc {
            for f in &homs_dm {
                for g in &homs_dm {
                    if f != g {
                        assert_ne!(h.compose(f).unwrap(), h.compose(g).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn composition_reaches_every_morphism_through_a_middle_stage() {
        // Surjectivity of composition across a chain d <= mid <= c.
        let d = sh(&[1]);
        let mid = sh(&[2]);
        let c = sh(&[3]);
        let all: Vec<Injection> = enumerate_injections(&d, &c);
        let mut reached = Vec::new();
        for h in enumerate_injections(&mid, &c) {
            for f in enumerate_injections(&d, &mid) {
                reached.push(h.compose(&f).unwrap());
            }
        }
        for target in &all {
            assert!(reached.contains(target));
        }
    }

    #[test]
    fn self_embed_examples() {
        let id1 = Injection::identity(&sh(&[1]));
        assert_eq!(id1.self_embed(0), Injection::identity(&sh(&[2])));

        let f = Injection::new(sh(&[1]), sh(&[2]), vec![vec![2]]).unwrap();
        let fi = f.self_embed(0);
        assert_eq!(fi.factor_images(0), &[1, 3]);
        assert_eq!(*fi.domain(), sh(&[2]));
        assert_eq!(*fi.codomain(), sh(&[3]));
    }

    #[test]
    fn self_embeds_commute_across_directions() {
        for f in enumerate_injections(&sh(&[1, 1]), &sh(&[2, 2])) {
            assert_eq!(f.self_embed(0).self_embed(1), f.self_embed(1).self_embed(0));
        }
    }

    #[test]
    fn self_embed_naturality_square() {
        // self_embed(f) . step(domain) = step(codomain) . f
        for f in enumerate_injections(&sh(&[1, 1]), &sh(&[2, 2])) {
            for i in 0..2 {
                let lhs = f.self_embed(i).compose(&Injection::step(f.domain(), i)).unwrap();
                let rhs = Injection::step(f.codomain(), i).compose(&f).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn factorization_round_trip_exhaustive() {
        for d1 in 0..=2usize {
            for d2 in 0..=2usize {
                for c1 in d1..=3usize {
                    for c2 in d2..=3usize {
                        let d = sh(&[d1, d2]);
                        let c = sh(&[c1, c2]);
                        for f in enumerate_injections(&d, &c) {
                            let (sigma, steps) = f.canonical_factorization();
                            assert_eq!(steps, c.minus(&d).unwrap());
                            let rho = Injection::staircase(&d, &steps);
                            let back = sigma.as_injection().compose(&rho).unwrap();
                            assert_eq!(back, f, "round trip for {f:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn factorization_of_full_permutation_is_itself() {
        let f = Injection::new(sh(&[2]), sh(&[2]), vec![vec![2, 1]]).unwrap();
        let (sigma, steps) = f.canonical_factorization();
        assert!(steps.is_zero());
        assert_eq!(sigma.as_injection(), f);
    }

    #[test]
    fn factorization_complement_is_order_preserving() {
        let f = Injection::new(sh(&[1]), sh(&[3]), vec![vec![2]]).unwrap();
        let (sigma, steps) = f.canonical_factorization();
        assert_eq!(steps, sh(&[2]));
        // complement of {2} in [3] is {1,3} placed in order, image point last
        assert_eq!(sigma.factor_images(0), &[1, 3, 2]);
    }

    #[test]
    fn encoding_round_trip() {
        let f = Injection::new(sh(&[2, 0]), sh(&[3, 1]), vec![vec![3, 1], vec![]]).unwrap();
        let txt = f.to_string();
        assert_eq!(txt, "[[3,1],[]]");
        let lists = parse_image_lists(&txt).unwrap();
        let g = Injection::new(sh(&[2, 0]), sh(&[3, 1]), lists).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn rejects_malformed() {
        assert!(Injection::new(sh(&[2]), sh(&[2]), vec![vec![1, 1]]).is_err());
        assert!(Injection::new(sh(&[1]), sh(&[1]), vec![vec![2]]).is_err());
        assert!(Injection::new(sh(&[1, 1]), sh(&[1, 1]), vec![vec![1]]).is_err());
        assert!(parse_image_lists("[1,2]").is_err());
        assert!(parse_image_lists("[[1,2]").is_err());
        assert!(parse_image_lists("").is_err());
    }
}
