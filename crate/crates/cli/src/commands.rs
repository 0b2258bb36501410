//! Command implementations shared by the binary and the test suites.

use std::fmt::Write as _;
use std::path::Path;

use foldings::freegroup::{Alphabet, Endo, Word};
use foldings::labeled_graph::SubgroupGraph;
use foldings::mapping_torus::{MappingTorus, SubgroupReduction, TorusWord};
use foldings::presentation::{collect_a, express_generator, present, verify};

use crate::machine::{
    self, format_symbols, FoldDoc, FreeSubgroupDoc, NormalFormDoc, PresentationDoc,
    ReduceDoc, ReductionInfo, StableReductionDoc, WitnessDoc,
};
use crate::problem::ProblemFile;
use crate::CliError;

/// Output of one command: the human text, the machine document when
/// requested, and whether verification failed (exit code 1).
#[derive(Debug, Default)]
pub struct CmdOutput {
    pub human: String,
    pub machine: Option<String>,
    pub verification_failed: bool,
}

impl CmdOutput {
    pub fn text(&self) -> &str {
        self.machine.as_deref().unwrap_or(&self.human)
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// Infer an alphabet from the identifiers of the given word strings, in
/// order of first appearance.
pub fn infer_alphabet(words: &[String]) -> Result<Alphabet, CliError> {
    let mut names: Vec<String> = Vec::new();
    for w in words {
        for token in w.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (base, _) = Alphabet::split_token(token);
            if !names.iter().any(|n| n == base) {
                names.push(base.to_string());
            }
        }
    }
    Alphabet::new(names).map_err(input_err)
}

fn write_dot_steps(
    dir: &Path,
    start_index: usize,
    dots: impl IntoIterator<Item = String>,
) -> Result<usize, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
    let mut index = start_index;
    for dot in dots {
        let path = dir.join(format!("step_{index:04}.dot"));
        std::fs::write(&path, dot)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
        index += 1;
    }
    Ok(index)
}

/// Fold a word list: print the basis and rank of the generated subgroup.
pub fn cmd_fold(
    words: &[String],
    alphabet_override: Option<&str>,
    machine: bool,
    dot_dir: Option<&Path>,
) -> Result<CmdOutput, CliError> {
    let alphabet = match alphabet_override {
        Some(names) => Alphabet::new(names.split_whitespace()).map_err(input_err)?,
        None => infer_alphabet(words)?,
    };
    let parsed: Vec<Word> = words
        .iter()
        .map(|w| alphabet.parse_word(w).map_err(input_err))
        .collect::<Result<_, _>>()?;
    if parsed.iter().any(|w| w.is_empty()) {
        return Err(CliError::Input("empty word in input".into()));
    }
    let sg = SubgroupGraph::new(alphabet.rank(), &parsed).map_err(input_err)?;
    let basis = sg.basis();

    if let Some(dir) = dot_dir {
        let chain = sg.fold_trace().replay(
            &foldings::labeled_graph::LabeledGraph::bouquet(alphabet.rank(), &parsed)
                .map_err(input_err)?,
        );
        write_dot_steps(dir, 0, chain.iter().map(|g| g.to_dot(&alphabet, None)))?;
    }

    let mut human = String::new();
    writeln!(human, "rank: {}", sg.rank()).unwrap();
    writeln!(human, "basis:").unwrap();
    for b in &basis {
        writeln!(human, "  {}", alphabet.format_word(b)).unwrap();
    }
    if sg.fold_trace().is_empty() {
        writeln!(human, "folds: none (already tight)").unwrap();
    } else {
        writeln!(human, "folds: {}", sg.fold_trace().len()).unwrap();
    }

    let machine = machine.then(|| {
        machine::to_json(&FoldDoc {
            kind: "fold".into(),
            alphabet: alphabet.names().to_vec(),
            rank: sg.rank(),
            basis: basis.iter().map(|b| alphabet.format_word(b)).collect(),
        })
    });
    Ok(CmdOutput { human, machine, verification_failed: false })
}

/// Pieces shared by `present` and `reduce`: the reduction of the subgroup
/// section, with the inner extension when a stable letter survives.
enum Reduced {
    Free { k: usize, conjugated: Vec<Word>, basis: Vec<Word> },
    Stable {
        m: usize,
        p: usize,
        b: Word,
        theta: Endo,
        rewritten: Vec<TorusWord>,
        stable: &'static str,
    },
}

fn reduce_problem(problem: &ProblemFile) -> Result<(MappingTorus, Reduced), CliError> {
    let torus = MappingTorus::new(problem.endo.clone())
        .map_err(|_| CliError::Input("endomorphism is not injective; refusing to run".into()))?;
    if problem.subgroup.is_empty() {
        return Err(CliError::Input("empty subgroup section".into()));
    }
    let reduced = match torus.reduce_subgroup(&problem.subgroup).map_err(input_err)? {
        SubgroupReduction::Free { k, conjugated, basis } => Reduced::Free { k, conjugated, basis },
        SubgroupReduction::StableLetter { m, p, b, theta, rewritten } => {
            let stable = if m == 1 && p == 0 && b.is_empty() { "t" } else { "s" };
            Reduced::Stable { m, p, b, theta, rewritten, stable }
        }
    };
    Ok((torus, reduced))
}

/// Run the whole pipeline on a problem file.
pub fn cmd_present(
    problem: &ProblemFile,
    depth_flag: Option<usize>,
    machine: bool,
    dot_dir: Option<&Path>,
) -> Result<CmdOutput, CliError> {
    let (_, reduced) = reduce_problem(problem)?;
    let alphabet = &problem.alphabet;
    let depth = depth_flag.or(problem.depth).unwrap_or(8);

    let Reduced::Stable { m, p, b, theta, rewritten, stable } = reduced else {
        // no stable letter survives: the subgroup is free
        let Reduced::Free { k, conjugated, basis } = reduced else { unreachable!() };
        return Ok(free_output(alphabet, k, &conjugated, &basis, machine));
    };

    let inner =
        MappingTorus::new(theta.clone()).map_err(|e| CliError::Input(e.to_string()))?;
    let (a, records) = collect_a(&inner, &rewritten);
    let build = present(&theta, &a, depth).map_err(input_err)?;
    let pres = &build.presentation;
    let report = verify(pres, &inner);

    if let Some(dir) = dot_dir {
        let mut index = 0;
        for run in &build.runs {
            let chain = run.trace.replay(&run.initial, &theta);
            index = write_dot_steps(
                dir,
                index,
                chain.iter().map(|pair| pair.z().to_dot(alphabet, Some(pair.x_marker()))),
            )?;
        }
    }

    let witnesses: Vec<WitnessDoc> = records
        .iter()
        .map(|rec| {
            let w = express_generator(&build, rec).map_err(input_err)?;
            Ok(WitnessDoc {
                generator: rec.generator.format(alphabet, stable),
                q: w.q,
                a_word: format_symbols(&w.a_word, pres.a_words.len()),
                r: w.r,
            })
        })
        .collect::<Result<_, CliError>>()?;

    let reduction_info = (stable == "s").then(|| ReductionInfo {
        m,
        p,
        b: alphabet.format_word(&b),
    });

    let mut human = String::new();
    if let Some(info) = &reduction_info {
        writeln!(
            human,
            "reduction: m = {}, p = {}, b = {}; stable letter {stable}",
            info.m, info.p, info.b
        )
        .unwrap();
        writeln!(
            human,
            "rewritten generators: {}",
            rewritten.iter().map(|g| g.format(alphabet, stable)).collect::<Vec<_>>().join(", ")
        )
        .unwrap();
    }
    human.push_str(&presentation_banner(pres, stable));
    for (i, w) in pres.a_words.iter().enumerate() {
        writeln!(human, "  a{} = {}", i + 1, alphabet.format_word(w)).unwrap();
    }
    for (i, w) in pres.b_words.iter().enumerate() {
        writeln!(human, "  b{} = {}", i + 1, alphabet.format_word(w)).unwrap();
    }
    writeln!(
        human,
        "certificate: depth {}, {}",
        pres.certified_depth(),
        if pres.certificate.all_free() { "all levels free" } else { "FAILED" }
    )
    .unwrap();
    writeln!(human, "restarts: {}", pres.restart_count).unwrap();
    writeln!(
        human,
        "verification: expansions {}; subgroup {}; relators {}",
        ok(report.expansions_ok),
        ok(report.subgroup_ok),
        ok(report.relators_ok)
    )
    .unwrap();
    writeln!(human, "witnesses:").unwrap();
    for w in &witnesses {
        writeln!(
            human,
            "  {} = {stable}^-{} · {} · {stable}^{}",
            w.generator, w.q, w.a_word, w.r
        )
        .unwrap();
    }

    let machine = machine.then(|| {
        machine::to_json(&PresentationDoc::from_presentation(
            alphabet,
            stable,
            reduction_info.clone(),
            pres,
            witnesses.clone(),
        ))
    });
    Ok(CmdOutput { human, machine, verification_failed: !report.passed() })
}

fn ok(flag: bool) -> &'static str {
    if flag {
        "ok"
    } else {
        "FAIL"
    }
}

fn presentation_banner(pres: &foldings::presentation::Presentation, stable: &str) -> String {
    let num_a = pres.a_words.len();
    let mut gens: Vec<String> = vec![stable.to_string()];
    gens.extend((0..num_a).map(|i| format!("a{}", i + 1)));
    gens.extend((0..pres.b_words.len()).map(|i| format!("b{}", i + 1)));
    let relators: Vec<String> = pres
        .relators
        .iter()
        .enumerate()
        .map(|(j, w)| {
            format!("{stable} a{} {stable}^-1 = {}", j + 1, format_symbols(w, num_a))
        })
        .collect();
    format!("presentation: <{} | {}>\n", gens.join(", "), relators.join(", "))
}

fn free_output(
    alphabet: &Alphabet,
    k: usize,
    conjugated: &[Word],
    basis: &[Word],
    machine: bool,
) -> CmdOutput {
    let mut human = String::new();
    writeln!(human, "subgroup avoids the stable letter: free of rank {}", basis.len()).unwrap();
    writeln!(human, "conjugation exponent k = {k}").unwrap();
    writeln!(human, "conjugated generators:").unwrap();
    for w in conjugated {
        writeln!(human, "  {}", alphabet.format_word(w)).unwrap();
    }
    writeln!(human, "basis:").unwrap();
    for w in basis {
        writeln!(human, "  {}", alphabet.format_word(w)).unwrap();
    }
    let machine = machine.then(|| {
        machine::to_json(&FreeSubgroupDoc {
            kind: "free_subgroup".into(),
            alphabet: alphabet.names().to_vec(),
            k,
            conjugated: conjugated.iter().map(|w| alphabet.format_word(w)).collect(),
            basis: basis.iter().map(|w| alphabet.format_word(w)).collect(),
        })
    });
    CmdOutput { human, machine, verification_failed: false }
}

/// Report the subgroup reduction without presenting.
pub fn cmd_reduce(problem: &ProblemFile, machine: bool) -> Result<CmdOutput, CliError> {
    let (_, reduced) = reduce_problem(problem)?;
    let alphabet = &problem.alphabet;
    match reduced {
        Reduced::Free { k, conjugated, basis } => {
            Ok(free_output(alphabet, k, &conjugated, &basis, machine))
        }
        Reduced::Stable { m, p, b, rewritten, stable, .. } => {
            let mut human = String::new();
            writeln!(human, "stable exponent image: {m}Z").unwrap();
            writeln!(
                human,
                "reduction: m = {m}, p = {p}, b = {}; stable letter {stable}",
                alphabet.format_word(&b)
            )
            .unwrap();
            writeln!(human, "rewritten generators:").unwrap();
            for g in &rewritten {
                writeln!(human, "  {}", g.format(alphabet, stable)).unwrap();
            }
            let machine = machine.then(|| {
                machine::to_json(&ReduceDoc {
                    kind: "reduction".into(),
                    alphabet: alphabet.names().to_vec(),
                    free: None,
                    stable: Some(StableReductionDoc {
                        m,
                        p,
                        b: alphabet.format_word(&b),
                        stable_letter: stable.into(),
                        generators: rewritten
                            .iter()
                            .map(|g| g.format(alphabet, stable))
                            .collect(),
                    }),
                })
            });
            Ok(CmdOutput { human, machine, verification_failed: false })
        }
    }
}

/// Normalize a single word of the extension.
pub fn cmd_normalize(
    problem: &ProblemFile,
    word: &str,
    machine: bool,
) -> Result<CmdOutput, CliError> {
    let torus = MappingTorus::new(problem.endo.clone())
        .map_err(|_| CliError::Input("endomorphism is not injective; refusing to run".into()))?;
    let w = TorusWord::parse(&problem.alphabet, "t", word).map_err(input_err)?;
    let nf = torus.normalize(&w);
    let human = format!("{}\n", nf.format(&problem.alphabet, "t"));
    let machine = machine.then(|| {
        machine::to_json(&NormalFormDoc {
            kind: "normal_form".into(),
            q: nf.q,
            x: problem.alphabet.format_word(&nf.x),
            r: nf.r,
        })
    });
    Ok(CmdOutput { human, machine, verification_failed: false })
}

/// Re-verify an emitted presentation document against a problem file.
pub fn cmd_verify(doc_json: &str, problem: &ProblemFile) -> Result<CmdOutput, CliError> {
    let doc: PresentationDoc = serde_json::from_str(doc_json)
        .map_err(|e| CliError::Input(format!("bad presentation document: {e}")))?;
    let alphabet = &problem.alphabet;
    let pres = doc.to_presentation(alphabet)?;
    let theta = match &doc.reduction {
        None => problem.endo.clone(),
        Some(info) => {
            let b = alphabet.parse_word(&info.b).map_err(input_err)?;
            problem.endo.power(info.m).twist(&b)
        }
    };
    let torus = MappingTorus::new(theta)
        .map_err(|_| CliError::Input("reduced endomorphism is not injective".into()))?;
    let report = verify(&pres, &torus);
    let mut human = String::new();
    writeln!(
        human,
        "verification: expansions {}; subgroup {}; relators {}",
        ok(report.expansions_ok),
        ok(report.subgroup_ok),
        ok(report.relators_ok)
    )
    .unwrap();
    for f in &report.failures {
        writeln!(human, "  {f}").unwrap();
    }
    writeln!(human, "{}", if report.passed() { "PASS" } else { "FAIL" }).unwrap();
    Ok(CmdOutput { human, machine: None, verification_failed: !report.passed() })
}

