mod common;

use std::collections::BTreeMap;

use num_bigint::BigUint;

use sdcodes::canonical::{code_cert, graph_cert, hadamard_aut_order, hadamard_cert, hadamard_equivalent, ColoredGraph, CodeCertOptions};
use sdcodes::hadamard::HadamardMatrix;

#[test]
fn order_four_certificates_match_brute_force() {
    let all = common::all_hadamard_4();
    assert_eq!(all.len(), 768);
    let mut by_form: BTreeMap<Vec<Vec<i8>>, Vec<usize>> = BTreeMap::new();
    let mut by_cert: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
    for (i, h) in all.iter().enumerate().step_by(7) {
        by_form.entry(common::brute_hadamard_form(h)).or_default().push(i);
        by_cert.entry(hadamard_cert(h).bytes).or_default().push(i);
    }
    let forms: Vec<_> = by_form.into_values().collect();
    let certs: Vec<_> = by_cert.into_values().collect();
    assert_eq!(forms, certs);
}

#[test]
fn small_automorphism_groups_match_brute_force() {
    let mut rng = common::rng(4);
    for m in 1..=2 {
        let h = HadamardMatrix::sylvester(m).unwrap();
        for _ in 0..3 {
            let g = common::perturb_hadamard(&h, &mut rng);
            assert_eq!(hadamard_aut_order(&g), BigUint::from(common::brute_hadamard_aut(&g)), "order {}", g.order());
        }
    }
}

#[test]
fn small_code_certificates_match_brute_force() {
    let mut rng = common::rng(11);
    let opts = CodeCertOptions::default();
    for (k, n) in [(2, 5), (3, 6), (2, 6)] {
        let codes: Vec<_> = (0..30).map(|_| common::random_systematic_code(k, n, &mut rng)).collect();
        let forms: Vec<_> = codes.iter().map(common::brute_code_form).collect();
        let certs: Vec<_> = codes.iter().map(|c| code_cert(c, &opts).unwrap()).collect();
        let mut classes = 0;
        for i in 0..codes.len() {
            for j in 0..i {
                assert_eq!(forms[i] == forms[j], certs[i] == certs[j], "[{n},{k}] codes {i} and {j}");
            }
            classes += usize::from((0..i).all(|j| forms[j] != forms[i]));
        }
        // more than one class, so the comparison is not vacuous
        assert!(classes > 1, "[{n},{k}]: {classes} classes");
    }
}

#[test]
fn small_graph_certificates_match_brute_force() {
    let mut rng = common::rng(5);
    let n = 6;
    let pairs: Vec<(u32, u32)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let perms: Vec<Vec<usize>> = {
        let mut out = Vec::new();
        let mut p: Vec<usize> = (0..n as usize).collect();
        permute(&mut p, 0, &mut out);
        out
    };
    let graphs: Vec<Vec<(u32, u32)>> = (0..40)
        .map(|_| pairs.iter().copied().filter(|_| rand::Rng::gen_bool(&mut rng, 0.5)).collect())
        .collect();
    let brute = |edges: &[(u32, u32)]| {
        perms
            .iter()
            .map(|p| {
                let mut e: Vec<(u32, u32)> = edges
                    .iter()
                    .map(|&(u, v)| {
                        let (a, b) = (p[u as usize] as u32, p[v as usize] as u32);
                        (a.min(b), a.max(b))
                    })
                    .collect();
                e.sort();
                e
            })
            .min()
            .unwrap()
    };
    let forms: Vec<_> = graphs.iter().map(|g| brute(g)).collect();
    let certs: Vec<_> = graphs
        .iter()
        .map(|g| graph_cert(&ColoredGraph::from_edges(vec![0; n as usize], g).unwrap()))
        .collect();
    for i in 0..graphs.len() {
        for j in 0..i {
            assert_eq!(forms[i] == forms[j], certs[i] == certs[j], "graphs {i} and {j}");
        }
        let auts = perms.iter().filter(|p| brute_is_aut(&graphs[i], p)).count();
        assert_eq!(certs[i].aut_order, BigUint::from(auts), "graph {i}");
    }
}

fn permute(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == p.len() {
        out.push(p.clone());
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, out);
        p.swap(k, i);
    }
}

fn brute_is_aut(edges: &[(u32, u32)], p: &[usize]) -> bool {
    let norm = |u: u32, v: u32| (u.min(v), u.max(v));
    let mut a: Vec<_> = edges.iter().map(|&(u, v)| norm(u, v)).collect();
    let mut b: Vec<_> = edges.iter().map(|&(u, v)| norm(p[u as usize] as u32, p[v as usize] as u32)).collect();
    a.sort();
    b.sort();
    a == b
}

#[test]
fn complete_bipartite_k22_is_the_square() {
    let g = ColoredGraph::from_edges(vec![0; 4], &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
    assert_eq!(graph_cert(&g).aut_order, BigUint::from(8u32));
    let sides = ColoredGraph::from_edges(vec![0, 0, 1, 1], &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
    assert_eq!(graph_cert(&sides).aut_order, BigUint::from(4u32));
}

#[test]
fn transposed_sylvester_is_equivalent() {
    let h = HadamardMatrix::sylvester(4).unwrap();
    assert!(hadamard_equivalent(&h, &h.transpose()));
    let mut rng = common::rng(8);
    let g = common::perturb_hadamard(&h, &mut rng);
    assert_eq!(hadamard_aut_order(&g), hadamard_aut_order(&h));
}
