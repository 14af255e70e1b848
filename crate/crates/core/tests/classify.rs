mod common;

use std::collections::BTreeSet;

use sdcodes::catalog::{classify_family, low_weight_words, ClassifyOptions};
use sdcodes::code::{bordered_double_circulant, four_negacirculant, quasi_twisted, Family, TernaryCode};
use sdcodes::gf3::{GF3Matrix, GF3Vector};
use sdcodes::Error;

fn digits(mut x: usize, len: usize) -> Vec<u8> {
    let mut d = vec![0u8; len];
    for s in d.iter_mut().rev() {
        *s = (x % 3) as u8;
        x /= 3;
    }
    d
}

fn all_codes(family: Family, n: usize) -> Vec<TernaryCode> {
    let v = |d: &[u8]| GF3Vector::from_symbols(d).unwrap();
    match family {
        Family::Bdc => (0..3usize.pow(n as u32 / 2 - 1))
            .map(|x| bordered_double_circulant(&v(&digits(x, n / 2 - 1))).unwrap())
            .collect(),
        Family::Qt => (0..3usize.pow(n as u32 / 2))
            .map(|x| quasi_twisted(&v(&digits(x, n / 2))).unwrap())
            .collect(),
        _ => (0..3usize.pow(n as u32 / 2))
            .map(|x| {
                let d = digits(x, n / 2);
                four_negacirculant(&v(&d[..n / 4]), &v(&d[n / 4..])).unwrap()
            })
            .collect(),
    }
}

/// `G G^T = 0` over the integers mod 3, and full rank `n/2`.
fn self_dual_by_hand(code: &TernaryCode) -> bool {
    let g: Vec<Vec<u8>> = code.generator().rows().iter().map(GF3Vector::symbols).collect();
    let orth = g.iter().all(|a| {
        g.iter().all(|b| a.iter().zip(b).map(|(&x, &y)| u32::from(x) * u32::from(y)).sum::<u32>() % 3 == 0)
    });
    orth && 2 * code.k() == code.n()
}

/// Whether the weight-3 words span the code and their supports split the
/// coordinates into blocks of four: the code is then a direct sum of
/// `[4, 2, 3]` codes, all of which are equivalent.
fn is_sum_of_tetracodes(code: &TernaryCode, words: &[Vec<u8>]) -> bool {
    let n = code.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let w3: Vec<&Vec<u8>> = words.iter().filter(|w| w.iter().filter(|&&s| s != 0).count() == 3).collect();
    for w in &w3 {
        let supp: Vec<usize> = (0..n).filter(|&j| w[j] != 0).collect();
        for &j in &supp[1..] {
            let (a, b) = (find(&mut parent, supp[0]), find(&mut parent, j));
            parent[a] = b;
        }
    }
    let mut sizes = vec![0; n];
    for j in 0..n {
        sizes[find(&mut parent, j)] += 1;
    }
    let blocks: Vec<usize> = sizes.into_iter().filter(|&s| s > 0).collect();
    let rank = GF3Matrix::from_symbol_rows(&w3.iter().map(|w| w.to_vec()).collect::<Vec<_>>())
        .map_or(0, |m| m.rank());
    blocks.iter().all(|&s| s == 4) && rank == code.k()
}

#[test]
fn length_twelve_matches_exhaustion() {
    for family in [Family::Bdc, Family::Qt, Family::FourNega] {
        let mut survivors = 0;
        let mut distinct = BTreeSet::new();
        let mut all_tetra = true;
        for code in all_codes(family, 12) {
            if !self_dual_by_hand(&code) {
                continue;
            }
            let mut words = common::all_codewords(&code);
            let d = words
                .iter()
                .map(|w| w.iter().filter(|&&s| s != 0).count())
                .filter(|&w| w > 0)
                .min()
                .unwrap();
            if d != 3 {
                continue;
            }
            survivors += 1;
            all_tetra &= is_sum_of_tetracodes(&code, &words);
            words.sort();
            distinct.insert(words);
        }
        let c = classify_family(&ClassifyOptions::new(family, 12)).unwrap();
        assert_eq!(c.survivors, survivors, "{family}");
        assert_eq!(c.distinct_codes, distinct.len(), "{family}");
        assert!(all_tetra, "{family}");
        assert_eq!(c.classes.len(), usize::from(survivors > 0), "{family}");
        assert_eq!(c.classes.iter().map(|r| r.codes).sum::<usize>(), distinct.len());
        for r in &c.classes {
            // three blocks of four weight-3 supports, two words each
            assert_eq!(r.a_min, 24);
        }
    }
}

#[test]
fn frozen_length_twelve_counts() {
    let counts: Vec<(usize, usize)> = [Family::Bdc, Family::Qt, Family::FourNega]
        .into_iter()
        .map(|f| {
            let c = classify_family(&ClassifyOptions::new(f, 12)).unwrap();
            (c.survivors, c.classes.len())
        })
        .collect();
    assert_eq!(counts, vec![(0, 0), (12, 1), (36, 1)]);
}

#[test]
fn low_weight_words_are_complete_on_random_self_dual_codes() {
    for code in all_codes(Family::FourNega, 12).into_iter().filter(self_dual_by_hand).step_by(5) {
        let all = common::all_codewords(&code);
        let mut expected: Vec<Vec<u8>> = all
            .into_iter()
            .filter(|w| (1..=6).contains(&w.iter().filter(|&&s| s != 0).count()))
            .collect();
        expected.sort();
        let mut got: Vec<Vec<u8>> = low_weight_words(&code, 6).unwrap().iter().map(GF3Vector::symbols).collect();
        got.sort();
        assert_eq!(got, expected);
    }
}

#[test]
fn suspended_run_resumes_to_the_same_answer() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("4nc.ck");
    let full = classify_family(&ClassifyOptions::new(Family::FourNega, 12)).unwrap();

    let mut opts = ClassifyOptions::new(Family::FourNega, 12);
    opts.checkpoint = Some(ck.clone());
    opts.shard = 100;
    opts.budget = 250;
    match classify_family(&opts).unwrap_err() {
        Error::Suspended { token, cursor, total } => {
            assert_eq!(token, ck.display().to_string());
            assert!(cursor <= 250 && cursor > 0, "{cursor}");
            assert_eq!(total, 729);
        }
        e => panic!("{e}"),
    }
    opts.budget = 250;
    assert!(matches!(classify_family(&opts), Err(Error::Suspended { .. })));
    opts.budget = u128::MAX;
    let resumed = classify_family(&opts).unwrap();
    assert_eq!(serde_json::to_value(&resumed).unwrap(), serde_json::to_value(&full).unwrap());

    let text = std::fs::read_to_string(&ck).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("s ")).count(), full.survivors);
    assert!(text.lines().any(|l| l == "cursor 729"));

    let mut wrong = ClassifyOptions::new(Family::Qt, 12);
    wrong.checkpoint = Some(ck);
    assert!(classify_family(&wrong).is_err());
}

#[test]
fn budget_without_checkpoint_is_an_error() {
    let mut opts = ClassifyOptions::new(Family::Qt, 12);
    opts.budget = 10;
    assert!(matches!(classify_family(&opts), Err(Error::Budget { .. })));
}
