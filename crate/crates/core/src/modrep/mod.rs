//! Modules over group algebras in prime characteristic.

mod hom;
mod meataxe;
mod module;
mod radical;
mod summary;

pub use hom::{are_isomorphic, endo_degree};
pub use meataxe::{chop, is_simple};
pub use module::{regular_module, sym_power_rep, GModule};
pub use radical::{radical_basis, radical_trace_chain};
pub use summary::{semisimple_summary, SimpleInfo, SimpleSummary};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::conjugacy::ell_regular_count;
    use crate::ffla::{FFMatrix, FFVector};
    use crate::{Config, Group};

    fn group(desc: &str) -> Arc<Group> {
        Arc::new(Group::from_descriptor(desc, &Config::default()).unwrap())
    }

    fn summary(desc: &str, ell: u32) -> SimpleSummary {
        semisimple_summary(&group(desc), ell, 7, &Config::default()).unwrap()
    }

    #[test]
    fn regular_module_is_permutation_representation() {
        let g = group("cyclic:4");
        let m = regular_module(&g, 2, &Config::default()).unwrap();
        assert_eq!((m.dim(), m.num_gens()), (4, 1));
        let a = &m.gen_actions()[0];
        for i in 0..4 {
            assert_eq!((0..4).filter(|&j| a.get(i, j) == 1).count(), 1);
            assert_eq!((0..4).filter(|&j| a.get(j, i) == 1).count(), 1);
        }
        let g5 = group("psl2:5");
        let m5 = regular_module(&g5, 5, &Config::default()).unwrap();
        assert_eq!((m5.dim(), m5.num_gens()), (60, 2));
        m5.check_representation(100, 1).unwrap();
        let tight = Config {
            modrep_cap: 50,
            ..Config::default()
        };
        assert!(matches!(
            regular_module(&g5, 5, &tight),
            Err(crate::Error::Resource(_))
        ));
    }

    #[test]
    fn sym_powers() {
        let sl = group("sl2:5");
        let triv = sym_power_rep(&sl, 0).unwrap();
        assert_eq!(triv.dim(), 1);
        assert!(triv.gen_actions().iter().all(|m| *m == FFMatrix::identity(5, 1)));
        let nat = sym_power_rep(&sl, 1).unwrap();
        let minus_i = sl.index_of(sl.matrix_element([4, 0, 0, 4]).unwrap()).unwrap();
        let mut neg = FFMatrix::identity(5, 2);
        neg.scale(4);
        assert_eq!(nat.element_action(minus_i), neg);
        for d in 0..5 {
            sym_power_rep(&sl, d).unwrap().check_representation(100, d as u64).unwrap();
        }
        let psl = group("psl2:5");
        assert!(sym_power_rep(&psl, 1).is_err());
        assert!(sym_power_rep(&psl, 6).is_err());
        let three = sym_power_rep(&psl, 2).unwrap();
        three.check_representation(100, 3).unwrap();
        assert!(is_simple(&three, 0, 200).unwrap());
        assert!(sym_power_rep(&group("cyclic:5"), 0).is_err());
    }

    #[test]
    fn chop_p_group() {
        let g = group("cyclic:4");
        let m = regular_module(&g, 2, &Config::default()).unwrap();
        let f = chop(&m, 1, 200).unwrap();
        assert_eq!(f.len(), 4);
        for s in &f {
            assert_eq!(s.dim(), 1);
            assert_eq!(s.gen_actions()[0], FFMatrix::identity(2, 1));
        }
    }

    #[test]
    fn chop_is_deterministic() {
        let g = group("psl2:5");
        let m = regular_module(&g, 2, &Config::default()).unwrap();
        let dims = |seed| {
            chop(&m, seed, 200)
                .unwrap()
                .iter()
                .map(|s| s.dim())
                .collect::<Vec<_>>()
        };
        assert_eq!(dims(11), dims(11));
        assert_eq!(dims(11).iter().sum::<usize>(), 60);
    }

    #[test]
    fn isomorphism_and_endomorphisms() {
        let psl = group("psl2:5");
        let a = sym_power_rep(&psl, 2).unwrap();
        let b = sym_power_rep(&psl, 2).unwrap();
        assert!(are_isomorphic(&a, &b).unwrap());
        assert_eq!(endo_degree(&a).unwrap(), 1);
        let triv = sym_power_rep(&psl, 0).unwrap();
        assert!(are_isomorphic(&triv, &triv).unwrap());
        assert!(!are_isomorphic(&triv, &a).unwrap());

        // the 4-dim F_2-simple of psl2:5 has endomorphism field F_4
        let s = summary("psl2:5", 2);
        let four: Vec<_> = s.simples.iter().filter(|x| x.d == 4).collect();
        assert!(four.iter().any(|x| x.e == 2), "{:?}", s.simples);
        let e2 = four.iter().find(|x| x.e == 2).unwrap();
        assert_eq!(commutant_dim(&e2.witness), 2);

        // a non-cyclic module is rejected
        let g = group("cyclic:2");
        let split = GModule::new(g, 3, vec![FFMatrix::identity(3, 2)]).unwrap();
        assert!(matches!(endo_degree(&split), Err(crate::Error::Contract(_))));
    }

    /// Dimension of `{E : E ρ(g) = ρ(g) E}` solved directly on `d²` unknowns.
    fn commutant_dim(m: &GModule) -> usize {
        let d = m.dim();
        let p = m.p();
        let mut rows = Vec::new();
        for a in m.gen_actions() {
            for i in 0..d {
                for j in 0..d {
                    // (E A - A E)_{ij} = Σ_k E_ik A_kj - A_ik E_kj
                    let mut row = vec![0u32; d * d];
                    for k in 0..d {
                        row[i * d + k] = (row[i * d + k] + a.get(k, j)) % p;
                        row[k * d + j] = (row[k * d + j] + p - a.get(i, k)) % p;
                    }
                    rows.push(row);
                }
            }
        }
        d * d - FFMatrix::from_rows(p, &rows).unwrap().rank()
    }

    #[test]
    fn endo_degree_matches_commutant() {
        for (desc, ell) in [("psl2:5", 2), ("psl2:7", 3), ("cyclic:7", 2), ("cyclic:5", 3)] {
            let s = summary(desc, ell);
            for x in &s.simples {
                if x.d <= 12 {
                    assert_eq!(commutant_dim(&x.witness), x.e, "{desc} ell={ell} d={}", x.d);
                }
            }
        }
    }

    #[test]
    fn semisimple_dimensions() {
        for (desc, ell, expect) in [
            ("psl2:5", 7, 60),
            ("psl2:5", 5, 35),
            ("psl2:5", 2, 25),
            ("psl2:5", 3, 35),
            ("cyclic:4", 2, 1),
            ("cyclic:9", 3, 1),
            ("cyclic:6", 3, 2),
            ("cyclic:1", 2, 1),
        ] {
            let s = summary(desc, ell);
            assert_eq!(s.dim_semisimple, expect, "{desc} ell={ell}");
            assert_eq!(s.dim_radical, group(desc).order() - expect);
        }
    }

    #[test]
    fn large_endomorphism_fields() {
        // 2 has order 36 mod 37 and order 20 mod 25
        let cfg = Config::default();
        for (desc, ell, want) in [("cyclic:37", 2, vec![(1, 1), (36, 36)]), ("cyclic:25", 2, vec![(1, 1), (4, 4), (20, 20)])] {
            let g = Arc::new(Group::from_descriptor(desc, &cfg).unwrap());
            let s = semisimple_summary(&g, ell, 0, &cfg).unwrap();
            let got: Vec<(usize, usize)> = s.simples.iter().map(|x| (x.d, x.e)).collect();
            assert_eq!(got, want, "{desc}");
            assert_eq!(s.dim_semisimple, g.order());
        }
    }

    #[test]
    fn brauer_count_small() {
        let cfg = Config::default();
        for (desc, ell) in [("psl2:5", 2), ("psl2:5", 3), ("psl2:5", 5), ("sl2:3", 2), ("cyclic:12", 2)] {
            let s = summary(desc, ell);
            let g = group(desc);
            assert_eq!(s.brauer_count(), ell_regular_count(&g, ell as u64, &cfg).unwrap());
            for x in &s.simples {
                assert_eq!(x.d % x.e, 0);
            }
        }
    }

    #[test]
    fn radical_basis_examples() {
        let g = group("cyclic:2");
        let s = summary("cyclic:2", 2);
        let j = radical_basis(&g, 2, &s).unwrap();
        assert_eq!(j.dim(), 1);
        assert_eq!(j.basis().row(0), &FFVector::from_residues(2, &[1, 1]));

        let g5 = group("psl2:5");
        let s5 = summary("psl2:5", 5);
        let j5 = radical_basis(&g5, 5, &s5).unwrap();
        assert_eq!(j5.dim(), 25);
        // closed under multiplication by group elements on both sides
        for b in j5.basis().rows() {
            for &gen in g5.generator_indices() {
                let mut left = FFVector::zero(5, 60);
                let mut right = FFVector::zero(5, 60);
                for x in 0..60 {
                    left.set(g5.mul_idx(gen, x), b.get(x));
                    right.set(g5.mul_idx(x, gen), b.get(x));
                }
                assert!(j5.contains(&left) && j5.contains(&right));
            }
        }
        let s7 = summary("psl2:5", 7);
        assert_eq!(radical_basis(&g5, 7, &s7).unwrap().dim(), 0);
        assert!(radical_basis(&g5, 3, &s7).is_err());
    }

    #[test]
    fn trace_chain_examples() {
        let cfg = Config::default();
        assert_eq!(radical_trace_chain(&group("cyclic:4"), 2, &cfg).unwrap(), 3);
        assert_eq!(radical_trace_chain(&group("cyclic:6"), 3, &cfg).unwrap(), 4);
        assert_eq!(radical_trace_chain(&group("cyclic:6"), 5, &cfg).unwrap(), 0);
        assert_eq!(radical_trace_chain(&group("cyclic:8"), 2, &cfg).unwrap(), 7);
        assert_eq!(radical_trace_chain(&group("ea:2:3"), 2, &cfg).unwrap(), 7);
        assert!(matches!(
            radical_trace_chain(&group("sl2:5"), 2, &cfg),
            Err(crate::Error::Resource(_))
        ));
        let a5 = group("psl2:5");
        assert_eq!(radical_trace_chain(&a5, 2, &cfg).unwrap(), 35);
        assert_eq!(radical_trace_chain(&a5, 5, &cfg).unwrap(), 25);
        assert_eq!(radical_trace_chain(&a5, 7, &cfg).unwrap(), 0);
    }
}
