use super::{p_ring, Z};
use crate::algebra::{MultiPoly, RationalFunction};

/// Quartic Kummer relation `(x² + 4y)·z² = 2S·z − T`.
#[derive(Clone, Debug)]
pub struct KummerData {
    pub s: MultiPoly,
    pub t: MultiPoly,
    /// `x² + 4y`
    pub lead: MultiPoly,
}

impl KummerData {
    pub fn printed() -> Self {
        let p = |s: &str| MultiPoly::parse(p_ring(), s).expect("Kummer data parses");
        Self {
            s: p("x*y^2 - l4*x*y - 2*l6*y + l8*x + 2*l10"),
            t: p("y^4 + 2*l4*y^3 - 4*l6*x*y^2 + 2*l8*y*(y + 2*x^2) - 4*l10*x*(x^2 + y) \
                  + l4^2*y^2 + 2*l4*l8*y - 4*l4*l10*x - 4*l6*l10 + l8^2"),
            lead: p("x^2 + 4*y"),
        }
    }

    /// `(x² + 4y)z² − 2Sz + T`, which vanishes on the surface.
    pub fn quartic(&self) -> MultiPoly {
        let z = MultiPoly::var(p_ring(), "z").unwrap();
        &(&(&self.lead * &z.pow(2)) - &(&self.s * &z).scale(&crate::algebra::rat(2))) + &self.t
    }
}

/// Rewrite `p` to z-degree ≤ 1, returning `(q, m)` with
/// `q ≡ (x² + 4y)^m · p` modulo the Kummer relation and `m` minimal.
///
/// Each pass clears the top power: `L·c·z^d = c·z^{d−2}·(2Sz − T)` after
/// multiplying everything by `L = x² + 4y`.
pub fn reduce_poly(p: &MultiPoly, k: &KummerData) -> (MultiPoly, u32) {
    let mut coeffs = p.coeffs_in(Z);
    let two_s = k.s.scale(&crate::algebra::rat(2));
    let mut m = 0;
    while coeffs.len() > 2 {
        let top = coeffs.pop().unwrap();
        let d = coeffs.len();
        for c in coeffs.iter_mut() {
            *c = &*c * &k.lead;
        }
        coeffs[d - 1] = &coeffs[d - 1] + &(&top * &two_s);
        coeffs[d - 2] = &coeffs[d - 2] - &(&top * &k.t);
        m += 1;
        while coeffs.len() > 2 && coeffs.last().is_some_and(MultiPoly::is_zero) {
            coeffs.pop();
        }
    }
    (MultiPoly::from_coeffs_in(p_ring(), Z, &coeffs), m)
}

fn balance(
    (n, en): (MultiPoly, u32),
    (d, ed): (MultiPoly, u32),
    k: &KummerData,
) -> RationalFunction {
    // n ≡ L^en·N and d ≡ L^ed·D, so N/D = (n·L^ed)/(d·L^en); cancel the
    // common power.
    let (n, d) = match en.cmp(&ed) {
        std::cmp::Ordering::Less => (&n * &k.lead.pow(ed - en), d),
        std::cmp::Ordering::Greater => (n, &d * &k.lead.pow(en - ed)),
        std::cmp::Ordering::Equal => (n, d),
    };
    RationalFunction::new(n, d).expect("Kummer reduction keeps the denominator nonzero")
}

/// Numerator and denominator reduced to z-degree ≤ 1, with the minimal
/// power of `x² + 4y` cleared across the fraction.
pub fn kummer_reduce(f: &RationalFunction, k: &KummerData) -> RationalFunction {
    balance(reduce_poly(&f.num, k), reduce_poly(&f.den, k), k)
}

/// Same result as [`kummer_reduce`] via precomputed residues
/// `L^{j−1}·z^j ≡ α_j z + β_j` applied to all powers at once.
pub fn kummer_reduce_by_powers(f: &RationalFunction, k: &KummerData) -> RationalFunction {
    let reduce = |p: &MultiPoly| -> (MultiPoly, u32) {
        let coeffs = p.coeffs_in(Z);
        let top = coeffs.len() - 1;
        if top < 2 {
            return (p.clone(), 0);
        }
        // residues[j] = (α_j, β_j) for j ≥ 1
        let zero = MultiPoly::zero(p_ring());
        let mut residues = vec![(zero.clone(), zero.clone()), (MultiPoly::one(p_ring()), zero)];
        let two_s = k.s.scale(&crate::algebra::rat(2));
        for j in 1..top {
            let (a, b) = residues[j].clone();
            // L^j z^{j+1} = L·z·(α z + β) = α(2Sz − T) + Lβ z
            let alpha = &(&a * &two_s) + &(&k.lead * &b);
            let beta = -&(&a * &k.t);
            residues.push((alpha, beta));
        }
        let m = top as u32 - 1;
        let mut lin = MultiPoly::zero(p_ring());
        let mut cst = &coeffs[0] * &k.lead.pow(m);
        for (j, c) in coeffs.iter().enumerate().skip(1) {
            let scale = k.lead.pow(m + 1 - j as u32);
            lin = &lin + &(&(&residues[j].0 * c) * &scale);
            cst = &cst + &(&(&residues[j].1 * c) * &scale);
        }
        let z = MultiPoly::var(p_ring(), "z").unwrap();
        (&(&lin * &z) + &cst, m)
    };
    balance(reduce(&f.num), reduce(&f.den), k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(p_ring(), s).unwrap()
    }

    #[test]
    fn low_degree_input_is_unchanged() {
        let k = KummerData::printed();
        let f = RationalFunction::new(p("x*z + y"), p("z - 3")).unwrap();
        let r = kummer_reduce(&f, &k);
        assert_eq!(r.num, f.num);
        assert_eq!(r.den, f.den);
    }

    #[test]
    fn z_squared_rewrites_to_relation() {
        let k = KummerData::printed();
        let f = RationalFunction::new(p("z^2"), p("1")).unwrap();
        let r = kummer_reduce(&f, &k);
        assert_eq!(r.num, &(&k.s * &p("2*z")) - &k.t);
        assert_eq!(r.den, p("x^2 + 4*y"));
    }

    #[test]
    fn z_cubed_needs_two_passes() {
        let k = KummerData::printed();
        let (q, m) = reduce_poly(&p("z^3"), &k);
        assert_eq!(m, 2);
        assert!(q.degree_in(Z) <= 1);
    }

    #[test]
    fn s_and_t_are_free_of_z() {
        let k = KummerData::printed();
        assert_eq!(k.s.degree_in(Z), 0);
        assert_eq!(k.t.degree_in(Z), 0);
    }

    #[test]
    fn rewrite_orders_agree() {
        let k = KummerData::printed();
        let f = RationalFunction::new(p("z^5 - x*z^3 + y^2*z^2 + l8"), p("z^4 + l10*z^3 - x")).unwrap();
        let a = kummer_reduce(&f, &k);
        let b = kummer_reduce_by_powers(&f, &k);
        assert!(a.cross_equal(&b));
    }
}
