use rand::Rng;
use symlift::complex::{
    enumerate_whitehead_poset, order_complex_homology, stabilizes, vertex_aut_eval, VertexAutomorphismSpec,
};
use symlift::random::rng_from_seed;
use symlift::words::GroupContext;

#[test]
fn rank_five_poset() {
    let p = enumerate_whitehead_poset(5).unwrap();
    assert_eq!(p.len(), 311);
    assert_eq!(p.chain_counts(), vec![311, 1545, 2225, 990]);
    assert_eq!(p.max_chain_cardinality(), 4);
    let h = order_complex_homology(&p);
    assert_eq!(h.euler_characteristic, 1);
    assert!(h.is_acyclic());
}

#[test]
fn trees_validate_and_folds_drop_one_hub() {
    for n in 2..=5 {
        let p = enumerate_whitehead_poset(n).unwrap();
        for t in &p.elements {
            t.validate().unwrap();
            for f in t.folds() {
                assert_eq!(f.unlabelled_count() + 1, t.unlabelled_count(), "{t} -> {f}");
                let lo = p.index_of(&f).unwrap();
                let hi = p.index_of(t).unwrap();
                assert!(p.less(lo, hi));
            }
        }
        // The order is generated by folds: every cover is one.
        for &(lo, hi) in &p.covers {
            assert!(p.elements[hi].folds().contains(&p.elements[lo]));
        }
    }
}

/// Vertex automorphisms of the bottom of a chain fix every tree above it,
/// so a chain is never rotated by them.
#[test]
fn vertex_automorphisms_fix_chains_above_them() {
    let mut rng = rng_from_seed(501);
    for n in [3usize, 4] {
        let ctx = GroupContext::free(n).unwrap();
        let p = enumerate_whitehead_poset(n).unwrap();
        let chains: Vec<Vec<usize>> = p.chains().into_iter().filter(|c| c.len() >= 2).collect();
        for _ in 0..60 {
            let chain = &chains[rng.gen_range(0..chains.len())];
            let bottom = &p.elements[chain[0]];
            let v = rng.gen_range(1..=n);
            let comps = bottom.components_at(v).len();
            let powers: Vec<i64> = (0..comps).map(|_| rng.gen_range(-2..=2)).collect();
            let spec = VertexAutomorphismSpec::from_components(bottom, v, &powers).unwrap();
            let f = vertex_aut_eval(&spec, ctx).unwrap();
            for &k in chain {
                assert!(stabilizes(&p.elements[k], &f).unwrap(), "{} at {v} {powers:?}", p.elements[k]);
            }
        }
    }
}
