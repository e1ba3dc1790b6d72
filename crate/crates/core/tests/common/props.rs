//! Property checks shared by the property tests and the acceptance run.
//! Each returns the number of instances checked or a description of the
//! first failure.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::ThreadPoolBuilder;

use linform::engine::compute_mf;
use linform::explorer::{scan_ap_minimizer_converse, spectrum, ScanBounds};
use linform::sets::{image_by_compositions, image_by_tuples};
use linform::theory::normalized_forms;
use linform::{compute_nf, image, search_min, LinearForm, NfConfig, SearchConfig};

pub type Check = Result<u64, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_form(r: &mut ChaCha8Rng, max_m: usize, max_coeff: i64) -> LinearForm {
    let m = r.gen_range(1..=max_m);
    let raw: Vec<i64> = (0..m).map(|_| r.gen_range(1..=max_coeff)).collect();
    LinearForm::new(&raw).unwrap()
}

pub fn random_set(r: &mut ChaCha8Rng, k: usize, lo: i64, hi: i64) -> Vec<i64> {
    let pool: Vec<i64> = (lo..=hi).collect();
    let mut a: Vec<i64> = pool.choose_multiple(r, k).copied().collect();
    a.sort();
    a
}

pub fn affine_invariance() -> Check {
    let mut r = rng(11);
    for _ in 0..1000 {
        let f = random_form(&mut r, 4, 12);
        let k = r.gen_range(1..=6);
        let a = random_set(&mut r, k, -40, 40);
        let c = *[-5i64, -4, -3, -2, -1, 1, 2, 3, 4, 5]
            .choose(&mut r)
            .unwrap();
        let d = r.gen_range(-100..=100);
        let b: Vec<i64> = a.iter().map(|&x| c * x + d).collect();
        let n = image(&f, &a).unwrap().size();
        let n2 = image(&f, &b).unwrap().size();
        if n != n2 || n != super::image_size(f.coeffs(), &a) {
            return Err(format!("f={f} A={a:?} c={c} d={d}: {n} vs {n2}"));
        }
    }
    Ok(1000)
}

/// `N_f(k-1) < N_f(k)` at a shared diameter, and `M_f(k-1) < M_f(k)`.
pub fn strict_monotonicity() -> Check {
    let mut n = 0;
    for m in 1..=3 {
        for f in normalized_forms(m, 4) {
            let d = f.u_total() as i64 * 3;
            let cfg = NfConfig {
                diameter: Some(d),
                ..NfConfig::default()
            };
            let mut prev_nf = 0;
            let mut prev_mf = 0;
            for k in 1..=4 {
                let nf = compute_nf(&f, k, &cfg).map_err(|e| e.to_string())?.best;
                let mf = compute_mf(&f, k).map_err(|e| e.to_string())?.value;
                if nf <= prev_nf || mf <= prev_mf {
                    return Err(format!(
                        "f={f} k={k}: N {prev_nf} -> {nf}, M {prev_mf} -> {mf}"
                    ));
                }
                prev_nf = nf;
                prev_mf = mf;
                n += 1;
            }
        }
    }
    Ok(n)
}

pub fn subset_sum_symmetry() -> Check {
    let mut r = rng(12);
    for _ in 0..500 {
        let f = random_form(&mut r, 8, 40);
        let s = f.subset_sums();
        let u = f.u_total();
        for x in 0..=u {
            if s.contains(x) != s.contains(u - x) {
                return Err(format!("f={f}: {x} vs {}", u - x));
            }
        }
    }
    Ok(500)
}

/// Composition and tuple evaluation agree with each other and with a
/// brute-force image.
pub fn dual_path_images() -> Check {
    let mut r = rng(13);
    for _ in 0..500 {
        let f = random_form(&mut r, 4, 9);
        let k = r.gen_range(1..=5);
        let a = random_set(&mut r, k, -30, 30);
        let x = image_by_compositions(&f, &a).unwrap();
        let y = image_by_tuples(&f, &a).unwrap();
        let z: Vec<i64> = super::image_set(f.coeffs(), &a).into_iter().collect();
        if x != y || x.values() != z.as_slice() {
            return Err(format!("f={f} A={a:?}"));
        }
    }
    Ok(500)
}

/// Results are identical, node counts included, under 1, 2 and 8 workers.
pub fn thread_determinism() -> Check {
    let run = || {
        let mut out = Vec::new();
        for c in [&[1u64, 3][..], &[2, 3], &[1, 1, 2], &[1, 2, 5]] {
            let f = LinearForm::from_coeffs(c).unwrap();
            let r = compute_nf(&f, 4, &NfConfig::default()).unwrap();
            out.push(serde_json::to_string(&r).unwrap());
            let s = spectrum(&f, 3, 10, None).unwrap();
            out.push(serde_json::to_string(&s).unwrap());
        }
        let scan = scan_ap_minimizer_converse(&ScanBounds::new(2, 4, 3)).unwrap();
        out.push(serde_json::to_string(&scan).unwrap());
        out
    };
    let mut reference = None;
    for threads in [1, 2, 8] {
        let pool = ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let got = pool.install(run);
        match &reference {
            None => reference = Some(got),
            Some(want) if *want != got => return Err(format!("{threads} threads differ")),
            Some(_) => {}
        }
    }
    Ok(3)
}

/// `C(k, m) <= M_f(k) <= k^m` on random forms, with the witness checked.
pub fn mf_sandwich(count: usize) -> Check {
    let mut r = rng(14);
    for _ in 0..count {
        let f = random_form(&mut r, 4, 20);
        let k = r.gen_range(1..=6);
        let m = f.arity() as u64;
        let res = compute_mf(&f, k).map_err(|e| e.to_string())?;
        let lo = super::binomial(k as u64, m);
        let hi = (k as u64).pow(m as u32);
        if res.value < lo || res.value > hi {
            return Err(format!("f={f} k={k}: {} not in [{lo}, {hi}]", res.value));
        }
        if super::image_size(f.coeffs(), &res.witness) as u64 != res.value {
            return Err(format!("f={f} k={k}: witness {:?}", res.witness));
        }
    }
    Ok(count as u64)
}

/// `M_f(k) = k^m` exactly when the subset sums are distinct.
pub fn mf_distinct_subset_sums() -> Check {
    let mut n = 0;
    for m in 1..=4 {
        for f in normalized_forms(m, 16) {
            let distinct = f.has_distinct_subset_sums();
            for k in 2..=4usize {
                let v = compute_mf(&f, k).map_err(|e| e.to_string())?.value;
                if (v == (k as u64).pow(m as u32)) != distinct {
                    return Err(format!("f={f} k={k}: M={v}, distinct={distinct}"));
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

/// `M_f(k) >= k (k-1) ... (k-m+1)` for distinct coefficients.
pub fn mf_falling_factorial() -> Check {
    let mut n = 0;
    for m in 1..=4 {
        for f in normalized_forms(m, 10)
            .into_iter()
            .filter(|f| f.is_strictly_increasing())
        {
            for k in 1..=6u64 {
                let v = compute_mf(&f, k as usize).map_err(|e| e.to_string())?.value;
                let ff: u64 = (0..m as u64).map(|i| k.saturating_sub(i)).product();
                if v < ff {
                    return Err(format!("f={f} k={k}: {v} < {ff}"));
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

/// `N_f(k) <= |f({0..k-1})| <= U (k - 1) + 1`.
pub fn nf_upper_sandwich() -> Check {
    let mut n = 0;
    for m in 1..=3 {
        for f in normalized_forms(m, 5) {
            for k in 1..=4usize {
                let r = compute_nf(&f, k, &NfConfig::default()).map_err(|e| e.to_string())?;
                let ap: Vec<i64> = (0..k as i64).collect();
                let at_ap = image(&f, &ap).unwrap().size() as u64;
                let top = f.u_total() * (k as u64 - 1) + 1;
                if !(r.lower <= r.best && r.best <= at_ap && at_ap <= top) {
                    return Err(format!("f={f} k={k}: {} {} {at_ap} {top}", r.lower, r.best));
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

/// Pruned search against plain enumeration, values and witness lists, for
/// every `m <= 3`, coefficients `<= 4`, `k <= 4`, `D <= 10`.
pub fn pruned_matches_naive() -> Check {
    let mut n = 0;
    for m in 1..=3 {
        for coeffs in super::forms(m, 4) {
            let f = LinearForm::from_coeffs(&coeffs).unwrap();
            for k in 1..=4usize {
                for d in (k as i64 - 1)..=10 {
                    let mut cfg = SearchConfig::new(d);
                    cfg.witness_cap = None;
                    let out = search_min(&f, k, &cfg).map_err(|e| e.to_string())?;
                    let (best, witnesses) = super::naive_min(&coeffs, k, d);
                    let got: Vec<Vec<i64>> =
                        out.witnesses.iter().map(|w| w.elems().to_vec()).collect();
                    if out.best != Some(best as u64)
                        || got != witnesses
                        || out.witness_count != witnesses.len() as u64
                    {
                        return Err(format!("f={f} k={k} d={d}: {:?} vs {best}", out.best));
                    }
                    n += 1;
                }
            }
        }
    }
    Ok(n)
}

pub fn all() -> Vec<(&'static str, Check)> {
    vec![
        ("affine invariance", affine_invariance()),
        ("strict monotonicity", strict_monotonicity()),
        ("subset-sum symmetry", subset_sum_symmetry()),
        ("dual-path images", dual_path_images()),
        ("thread determinism", thread_determinism()),
        ("M_f sandwich", mf_sandwich(200)),
        (
            "M_f = k^m iff distinct subset sums",
            mf_distinct_subset_sums(),
        ),
        ("M_f falling factorial", mf_falling_factorial()),
        ("N_f sandwich", nf_upper_sandwich()),
    ]
}
