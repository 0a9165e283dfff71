// SPDX-License-Identifier: Apache-2.0

//! Acceptance criteria. Runs every check in order and prints one line per
//! criterion; exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use linkrec::corpus::{AuditedSource, RecordKey};
use linkrec::hybrid::{fit_validation_split, tune_alpha, Channels};
use linkrec::learn::{logistic_gradient, logistic_objective, make_ensemble, LinearModel, Node};
use linkrec::linkgen::{self, Window};
use linkrec::tabular::LEAKAGE_DENYLIST;
use linkrec::textprep::{CodeTermPattern, TokenStream};
use linkrec::{
    combine, cross_validate, kfold, metrics, train, train_hybrid, Classifier, Config, Corpus, EnsembleKind,
    HybridModel, LearnerParams, SignalParams, SparseVector, TabularEncoder, TextualVectorizer, TfidfModel,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

// ---------------------------------------------------------------------------

fn published_reference_numbers() -> Outcome {
    let (corpus, cands) = synthetic(11, 60, SignalParams::default());
    let report = cross_validate(&cands, &corpus, &quick_config(11), true).map_err(|e| e.to_string())?;
    let r = &report.reference;
    ensure(
        (r.hybrid_recall, r.hybrid_precision, r.hybrid_f1) == (90.14, 87.78, 88.88),
        "hybrid reference numbers",
    )?;
    ensure(
        (r.textual_f1, r.nontextual_f1) == (80.82, 88.36),
        "ablation reference numbers",
    )?;
    ensure(r.hybrid_f1_std == 3.01, "reference std")?;
    let json: serde_json::Value = serde_json::from_str(&report.to_json()).map_err(|e| e.to_string())?;
    ensure(
        json["reference"]["hybrid_f1"] == 88.88,
        "reference block missing from JSON",
    )?;
    Ok("reference block present in report metadata".into())
}

fn code_term_suite() -> Outcome {
    use CodeTermPattern::*;
    let positives = [
        ("OPT_INFO", CNotation),
        ("op.addOption", QualifiedName),
        ("addToList", CamelCase),
        ("XOR", UpperCase),
        ("_cmd", SystemVariable),
        ("std::env", ReferenceExpression),
    ];
    for (token, pattern) in positives {
        ensure(pattern.matches(token), format!("{token} rejected by {pattern:?}"))?;
    }
    for token in ["opt", "add", "xor", "9_x", "::", "_"] {
        for p in CodeTermPattern::ALL {
            ensure(!p.matches(token), format!("{token} accepted by {p:?}"))?;
        }
    }
    Ok("6 positives accepted, 6 negatives rejected".into())
}

fn tfidf_oracle() -> Outcome {
    let docs: Vec<Vec<&str>> = vec![
        vec!["issu", "commit", "link", "recoveri"],
        vec!["commit", "messag", "commit", "diff"],
        vec!["link", "link", "link"],
        vec!["bug", "fix", "null", "pointer", "fix"],
        vec![],
        vec!["issu", "link", "bug", "fix", "commit", "messag"],
    ];
    let streams: Vec<TokenStream> = docs
        .iter()
        .map(|d| TokenStream::natural(d.iter().map(|s| s.to_string()).collect()))
        .collect();
    let model = TfidfModel::fit(&streams).map_err(|e| e.to_string())?;

    let counts: Vec<_> = docs.iter().map(|d| count_ngrams(d)).collect();
    let vocab: BTreeSet<&String> = counts.iter().flat_map(|c| c.keys()).collect();
    ensure(model.width() == vocab.len(), "vocabulary size")?;
    let n = docs.len() as f64;
    let idf = |term: &str| {
        let df = counts.iter().filter(|c| c.contains_key(term)).count() as f64;
        ((1.0 + n) / (1.0 + df)).ln() + 1.0
    };
    let mut worst: f64 = 0.0;
    let probe = vec!["link", "fix", "unseen", "link", "fix"];
    let probe_counts = count_ngrams(&probe);
    for (i, c) in counts.iter().chain(std::iter::once(&probe_counts)).enumerate() {
        let stream = if i < docs.len() {
            streams[i].clone()
        } else {
            TokenStream::natural(probe.iter().map(|s| s.to_string()).collect())
        };
        let got = model.transform(&stream);
        let mut expected = vec![0.0; model.width()];
        for (term, &tf) in c {
            if let Some(j) = vocab.iter().position(|v| *v == term) {
                expected[j] = tf as f64 * idf(term);
            }
        }
        let norm = expected.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            expected.iter_mut().for_each(|v| *v /= norm);
        }
        for (j, e) in expected.iter().enumerate() {
            worst = worst.max((got.get(j) - e).abs());
        }
    }
    ensure(worst <= 1e-12, format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e} over {} terms", model.width()))
}

/// Exact weighted Gini of a partition, as a fraction `num / den`.
fn gini_fraction(parts: &[(i128, i128)]) -> (i128, i128) {
    // Σ 2 g (n - g) / n over non-empty parts
    let mut num = 0i128;
    let mut den = 1i128;
    for &(g, n) in parts.iter().filter(|(_, n)| *n > 0) {
        num = num * n + 2 * g * (n - g) * den;
        den *= n;
    }
    (num, den)
}

fn less(a: (i128, i128), b: (i128, i128)) -> bool {
    a.0 * b.1 < b.0 * a.1
}

fn learner_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    // (a) depth-1 tree vs exhaustive split search
    for dataset in 0..20 {
        let n = rng.gen_range(6..30);
        let rows: Vec<[f64; 2]> = (0..n)
            .map(|_| [rng.gen_range(0..5) as f64, rng.gen_range(-2..3) as f64])
            .collect();
        let mut y: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        y[0] = true;
        y[1] = false;
        let x: Vec<SparseVector> = rows.iter().map(|r| SparseVector::from_dense(r)).collect();
        let model = train(&LearnerParams::decision_tree(1), &x, &y).map_err(|e| e.to_string())?;

        let total_pos = y.iter().filter(|&&l| l).count() as i128;
        let parent = gini_fraction(&[(total_pos, n as i128)]);
        let mut best: Option<(usize, f64, (i128, i128))> = None;
        for f in 0..2 {
            let mut values: Vec<f64> = rows.iter().map(|r| r[f]).collect();
            values.sort_by(f64::total_cmp);
            values.dedup();
            for w in values.windows(2) {
                let t = (w[0] + w[1]) / 2.0;
                let (mut lg, mut ln) = (0i128, 0i128);
                for (r, &l) in rows.iter().zip(&y) {
                    if r[f] <= t {
                        ln += 1;
                        lg += i128::from(l);
                    }
                }
                let score = gini_fraction(&[(lg, ln), (total_pos - lg, n as i128 - ln)]);
                if !less(score, parent) {
                    continue;
                }
                if best.is_none_or(|(_, _, b)| less(score, b)) {
                    best = Some((f, t, score));
                }
            }
        }
        let nodes = model.trees()[0].nodes().to_vec();
        match (best, nodes.first()) {
            (None, Some(Node::Leaf { value })) => {
                ensure(
                    *value == total_pos as f64 / n as f64,
                    format!("dataset {dataset}: root leaf"),
                )?;
            }
            (
                Some((f, t, _)),
                Some(&Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                }),
            ) => {
                ensure(
                    feature as usize == f && threshold == t,
                    format!("dataset {dataset}: split ({feature}, {threshold}) expected ({f}, {t})"),
                )?;
                let frac = |go_left: bool| {
                    let sel: Vec<bool> = rows
                        .iter()
                        .zip(&y)
                        .filter(|(r, _)| (r[f] <= t) == go_left)
                        .map(|(_, &l)| l)
                        .collect();
                    sel.iter().filter(|&&l| l).count() as f64 / sel.len() as f64
                };
                for (child, go_left) in [(left, true), (right, false)] {
                    let Node::Leaf { value } = nodes[child as usize] else {
                        return Err(format!("dataset {dataset}: child is not a leaf"));
                    };
                    ensure(value == frac(go_left), format!("dataset {dataset}: leaf probability"))?;
                }
            }
            _ => return Err(format!("dataset {dataset}: tree shape differs from oracle")),
        }
    }

    // (b) boosting loss never increases over 60 stages
    let pts: Vec<[f64; 3]> = (0..200)
        .map(|_| {
            [
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(0.0..1.0),
            ]
        })
        .collect();
    let x: Vec<SparseVector> = pts.iter().map(|p| SparseVector::from_dense(p)).collect();
    let y: Vec<bool> = pts
        .iter()
        .map(|p| p[0] * p[1] + 0.3 * p[2] + rng.gen_range(-0.5..0.5) > 0.0)
        .collect();
    for params in [
        LearnerParams::nontextual_gradient_boosting(),
        LearnerParams::nontextual_regularized_boosting(),
    ] {
        let m = train(&params, &x, &y).map_err(|e| e.to_string())?;
        let loss = m.training_loss().expect("boosted");
        ensure(loss.len() == 61, "stage count")?;
        for (t, w) in loss.windows(2).enumerate() {
            ensure(
                w[1] <= w[0],
                format!("{:?} stage {t}: {} -> {}", params.variant, w[0], w[1]),
            )?;
        }
    }

    // (c) logistic gradient vs central differences on a 5-point dataset
    let x5: Vec<SparseVector> = [[0.5, -1.0], [1.5, 0.2], [-0.3, 0.8], [2.0, 2.0], [0.0, -0.7]]
        .iter()
        .map(|r| SparseVector::from_dense(r))
        .collect();
    let y5 = [true, false, true, true, false];
    let model = LinearModel::new(vec![0.3, -0.8], 0.2);
    let l2 = 1e-4;
    let (gw, gb) = logistic_gradient(&model, &x5, &y5, l2);
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    #[allow(clippy::needless_range_loop)]
    for j in 0..3 {
        let shift = |d: f64| {
            let mut m = model.clone();
            if j < 2 {
                m.weights[j] += d;
            } else {
                m.bias += d;
            }
            logistic_objective(&m, &x5, &y5, l2)
        };
        let fd = (shift(h) - shift(-h)) / (2.0 * h);
        let analytic = if j < 2 { gw[j] } else { gb };
        worst = worst.max((fd - analytic).abs() / analytic.abs().max(1e-12));
    }
    ensure(worst < 1e-4, format!("relative gradient error {worst:e}"))?;

    // (d) soft vote is the exact member mean
    let gb = train(&LearnerParams::nontextual_gradient_boosting(), &x, &y).map_err(|e| e.to_string())?;
    let xgb = train(&LearnerParams::nontextual_regularized_boosting(), &x, &y).map_err(|e| e.to_string())?;
    let ens = make_ensemble(EnsembleKind::GbXgb, vec![gb.clone(), xgb.clone()]).map_err(|e| e.to_string())?;
    for xi in &x {
        let mean = (gb.predict_proba(xi).unwrap() + xgb.predict_proba(xi).unwrap()) / 2.0;
        ensure(ens.predict_proba(xi).unwrap() == mean, "ensemble mean")?;
    }
    Ok(format!(
        "20 stumps exact, loss monotone, gradient rel err {worst:.1e}, vote exact"
    ))
}

fn brute_force_false_links(corpus: &Corpus, limit: i64) -> BTreeSet<(String, String)> {
    let mut out = BTreeSet::new();
    for c in corpus.commits().iter().filter(|c| !c.linked_issue_ids.is_empty()) {
        for i in corpus.issues() {
            if c.linked_issue_ids.contains(&i.issue_id) {
                continue;
            }
            let mut issue_dates = vec![i.created_date.0, i.updated_date.0];
            issue_dates.extend(i.resolved_date.map(|t| t.0));
            let close = [c.author_time_date.0, c.commit_time_date.0]
                .iter()
                .any(|&cd| issue_dates.iter().any(|&id| (cd - id).abs() <= limit));
            if close {
                out.insert((i.issue_id.clone(), c.commit_hash.clone()));
            }
        }
    }
    out
}

fn linkgen_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut total = 0;
    for _ in 0..100 {
        let n_issues = rng.gen_range(1..=10);
        let n_commits = rng.gen_range(1..=10);
        // half-day grid so the 7-day boundary is hit exactly
        let at = |rng: &mut ChaCha8Rng| T0 + rng.gen_range(0..60) * DAY / 2;
        let issues: Vec<_> = (0..n_issues)
            .map(|k| {
                let created = at(&mut rng);
                let updated = created + rng.gen_range(0..20) * DAY / 2;
                let resolved = rng.gen_bool(0.7).then(|| created + rng.gen_range(0..30) * DAY / 2);
                issue(&format!("P-{k}"), created, updated, resolved)
            })
            .collect();
        let commits: Vec<_> = (0..n_commits)
            .map(|k| {
                let a = at(&mut rng);
                let c = a + rng.gen_range(0..6) * DAY / 2;
                let links: Vec<String> = (0..n_issues)
                    .filter(|_| rng.gen_bool(0.25))
                    .map(|k| format!("P-{k}"))
                    .collect();
                let refs: Vec<&str> = links.iter().map(String::as_str).collect();
                commit(&format!("{k:040x}"), a, c, &refs)
            })
            .collect();
        let corpus = Corpus::new("P", issues, commits).map_err(|e| e.to_string())?;
        let got: BTreeSet<(String, String)> = linkgen::generate_false_links(&corpus, Window::Days(7))
            .into_iter()
            .map(|c| (c.issue_id, c.commit_hash))
            .collect();
        let want = brute_force_false_links(&corpus, 7 * DAY);
        ensure(got == want, format!("mismatch: got {} want {}", got.len(), want.len()))?;
        total += want.len();
    }

    // one link per commit, unbounded window: c·(i−1)
    let (i, c) = (7, 5);
    let issues: Vec<_> = (0..i)
        .map(|k| issue(&format!("P-{k}"), T0 + k * 40 * DAY, T0 + k * 40 * DAY, None))
        .collect();
    let commits: Vec<_> = (0..c)
        .map(|k| {
            let link = format!("P-{}", k % i);
            commit(
                &format!("{k:040x}"),
                T0 + k * 90 * DAY,
                T0 + k * 90 * DAY,
                &[link.as_str()],
            )
        })
        .collect();
    let corpus = Corpus::new("P", issues, commits).map_err(|e| e.to_string())?;
    let n = linkgen::generate_false_links(&corpus, Window::Unbounded).len();
    ensure(n == (c * (i - 1)) as usize, format!("unbounded count {n}"))?;
    Ok(format!(
        "100 corpora exact ({total} false links), unbounded count {n} = c(i-1)"
    ))
}

fn alpha_fusion() -> Outcome {
    ensure(
        (combine(0.9, 0.4, 0.6).unwrap() - 0.70).abs() <= 1e-15,
        "0.6·0.9 + 0.4·0.4",
    )?;
    ensure(
        combine(0.3, 0.8, 0.0).unwrap() == 0.8 && combine(0.3, 0.8, 1.0).unwrap() == 0.3,
        "endpoints",
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for fixture in 0..50 {
        let n = rng.gen_range(4..60);
        let labels: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let p_nt: Vec<f64> = labels
            .iter()
            .map(|&l| (0.5 * f64::from(u8::from(l)) + rng.gen_range(0.0..0.5)).min(1.0))
            .collect();
        let p_t: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let c = tune_alpha(&p_nt, &p_t, &labels).map_err(|e| e.to_string())?;
        ensure(
            c.f1 >= c.grid[0].1 && c.f1 >= c.grid[20].1,
            format!("fixture {fixture} below an endpoint"),
        )?;
    }

    // complementary channels: each alone F1 = 0.5, together separable
    let k = 25;
    let mut p_nt = Vec::new();
    let mut p_t = Vec::new();
    let mut labels = Vec::new();
    for (a, b, l) in [
        (0.9, 0.4, true),
        (0.4, 0.9, true),
        (0.55, 0.1, false),
        (0.1, 0.55, false),
    ] {
        for _ in 0..k {
            p_nt.push(a);
            p_t.push(b);
            labels.push(l);
        }
    }
    let at = |p: &[f64]| {
        metrics(&p.iter().map(|&v| v >= 0.5).collect::<Vec<_>>(), &labels)
            .unwrap()
            .f1
    };
    let (f_nt, f_t) = (at(&p_nt), at(&p_t));
    ensure(f_nt <= 0.7 && f_t <= 0.7, "channels are not weak alone")?;
    let c = tune_alpha(&p_nt, &p_t, &labels).map_err(|e| e.to_string())?;
    ensure(c.f1 >= 0.8, format!("tuned F1 {}", c.f1))?;
    Ok(format!(
        "complementary fixture: channels {f_nt:.2}/{f_t:.2}, tuned {:.2} at alpha {}",
        c.f1, c.alpha
    ))
}

fn end_to_end() -> Outcome {
    let (corpus, cands) = synthetic(1, 400, SignalParams::default());
    let strong = cross_validate(&cands, &corpus, &Config::default(), true).map_err(|e| e.to_string())?;
    ensure(
        strong.mean_f1 >= 0.90,
        format!("strong-signal mean F1 {:.4}", strong.mean_f1),
    )?;
    let sa = strong.ablation.as_ref().expect("ablation requested");
    let best_channel = sa.textual.f1.mean.max(sa.nontextual.f1.mean);
    ensure(
        strong.mean_f1 >= best_channel - 0.02,
        format!("hybrid {:.4} below best channel {best_channel:.4}", strong.mean_f1),
    )?;

    let no_text = SignalParams {
        lexical: 0.0,
        ..SignalParams::default()
    };
    let (corpus, cands) = synthetic(1, 400, no_text);
    let report = cross_validate(&cands, &corpus, &Config::default(), true).map_err(|e| e.to_string())?;
    let ablation = report.ablation.as_ref().expect("ablation requested");
    let mean_alpha = report.alphas.iter().sum::<f64>() / report.alphas.len() as f64;
    let gap = (ablation.nontextual.f1.mean - report.mean_f1).abs();
    ensure(mean_alpha >= 0.60, format!("mean tuned alpha {mean_alpha:.3}"))?;
    ensure(gap <= 0.03, format!("non-textual vs hybrid gap {gap:.4}"))?;
    Ok(format!(
        "strong F1 {:.4} (textual {:.4}, non-textual {:.4}); text removed: alphas {:?} (mean {mean_alpha:.3}), hybrid {:.4} vs non-textual {:.4}",
        strong.mean_f1,
        sa.textual.f1.mean,
        sa.nontextual.f1.mean,
        report.alphas,
        report.mean_f1,
        ablation.nontextual.f1.mean
    ))
}

fn determinism() -> Outcome {
    let (corpus, cands) = synthetic(3, 120, SignalParams::default());
    let config = Config::seeded(3);
    let a = cross_validate(&cands, &corpus, &config, true)
        .map_err(|e| e.to_string())?
        .to_json();
    let b = cross_validate(&cands, &corpus, &config, true)
        .map_err(|e| e.to_string())?
        .to_json();
    ensure(a == b, "reports differ")?;

    let model = train_hybrid(&cands, &corpus, &config).map_err(|e| e.to_string())?;
    let bytes = model.to_bytes().map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("model.hlb");
    model.save(&path).map_err(|e| e.to_string())?;
    let loaded = HybridModel::load(&path).map_err(|e| e.to_string())?;
    ensure(
        loaded.to_bytes().map_err(|e| e.to_string())? == bytes,
        "re-encoded bundle differs",
    )?;
    let retrained = train_hybrid(&cands, &corpus, &config).map_err(|e| e.to_string())?;
    ensure(
        retrained.to_bytes().map_err(|e| e.to_string())? == bytes,
        "retrained bundle differs",
    )?;

    let pool = linkgen::candidate_pool(&corpus, Window::Unbounded);
    let pairs: Vec<_> = pool.iter().cycle().take(1000).cloned().collect();
    let before = model.predict_all(&pairs, &corpus).map_err(|e| e.to_string())?;
    let after = loaded.predict_all(&pairs, &corpus).map_err(|e| e.to_string())?;
    ensure(before == after, "predictions differ after round trip")?;
    Ok(format!(
        "{}-byte report identical; {}-byte bundle, 1000 predictions identical",
        a.len(),
        bytes.len()
    ))
}

fn leakage() -> Outcome {
    let (corpus, cands) = synthetic(4, 150, SignalParams::default());
    let config = quick_config(4);
    let resources = config.load_resources().map_err(|e| e.to_string())?;
    let folds = kfold(cands.len(), 5, config.fold_seed).map_err(|e| e.to_string())?;
    let mut checked_test_only = 0;
    for fold in &folds {
        let train: Vec<_> = fold.train.iter().map(|&i| cands[i].clone()).collect();
        let test: Vec<_> = fold.test.iter().map(|&i| cands[i].clone()).collect();
        let train_keys = record_keys(&train);
        let test_only: BTreeSet<RecordKey> = record_keys(&test).difference(&train_keys).cloned().collect();
        checked_test_only += test_only.len();

        let audited = AuditedSource::new(&corpus);
        train_hybrid(&train, &audited, &config).map_err(|e| e.to_string())?;
        let touched = audited.accessed();
        ensure(
            touched.is_subset(&train_keys),
            "training read a record outside its fold",
        )?;
        ensure(touched.is_disjoint(&test_only), "training read a test-only record")?;

        // fitting without the test-only records gives identical artifacts
        let restricted = Restricted::to(&corpus, &train);
        let (fit, _) = fit_validation_split(&train, config.validation_fraction, config.split_seed).unwrap();
        let v_full = TextualVectorizer::fit(&fit, &corpus, &resources.stopwords, config.max_features).unwrap();
        let v_cut = TextualVectorizer::fit(&fit, &restricted, &resources.stopwords, config.max_features)
            .map_err(|e| e.to_string())?;
        ensure(v_full == v_cut, "vectorizer depends on test records")?;
        let e_full = TabularEncoder::fit(&fit, &corpus, resources.categories.clone(), &config.tabular()).unwrap();
        let e_cut = TabularEncoder::fit(&fit, &restricted, resources.categories.clone(), &config.tabular())
            .map_err(|e| e.to_string())?;
        ensure(e_full == e_cut, "encoder depends on test records")?;
    }
    ensure(checked_test_only > 0, "folds had no test-only records to check")?;

    // no label-derived columns; flipping labels changes no feature
    let channels = Channels::fit(&cands, &corpus, &config, &resources).map_err(|e| e.to_string())?;
    for name in channels.nontextual.encoder.feature_names() {
        let lower = name.to_lowercase();
        ensure(
            !LEAKAGE_DENYLIST.iter().any(|d| lower.contains(d)),
            format!("label-like column {name}"),
        )?;
    }
    let flipped: Vec<_> = cands
        .iter()
        .map(|c| linkrec::LinkCandidate {
            label: !c.label,
            ..c.clone()
        })
        .collect();
    let enc = &channels.nontextual.encoder;
    let vec = &channels.textual.vectorizer;
    ensure(
        enc.featurize_all(&cands, &corpus).unwrap() == enc.featurize_all(&flipped, &corpus).unwrap(),
        "tabular features depend on labels",
    )?;
    ensure(
        vec.featurize_all(&cands, &corpus).unwrap() == vec.featurize_all(&flipped, &corpus).unwrap(),
        "textual features depend on labels",
    )?;
    Ok(format!(
        "5 folds audited, {checked_test_only} test-only records never read; {} tabular columns clean",
        enc.width()
    ))
}

// ---------------------------------------------------------------------------

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "published numbers recorded as reference",
            Duration::from_secs(60),
            published_reference_numbers,
        ),
        ("code-term pattern suite", Duration::from_secs(1), code_term_suite),
        ("tf-idf oracle", Duration::from_secs(1), tfidf_oracle),
        ("learner oracles", Duration::from_secs(30), learner_oracles),
        ("false-link generation oracle", Duration::from_secs(10), linkgen_oracle),
        ("fusion and alpha tuning", Duration::from_secs(10), alpha_fusion),
        (
            "end-to-end synthetic reproduction",
            Duration::from_secs(300),
            end_to_end,
        ),
        ("determinism", Duration::from_secs(300), determinism),
        ("leakage", Duration::from_secs(300), leakage),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (name, limit, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.1?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  {name} ({elapsed:.2?}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name} ({elapsed:.2?}): {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
