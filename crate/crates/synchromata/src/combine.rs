//! Combining machines on disjoint alphabet blocks, conjugation, and the
//! output-surjectivity test behind the "core equals the whole power" lemma.

use crate::error::{Error, Result};
use crate::minimize::minimize;
use crate::sync::{core, sync_analysis, sync_level};
use crate::transducer::{StateId, Transducer};
use crate::words::{count_words, Letter, Word};
use crate::Caps;

/// One part of a combination: a machine placed on a contiguous letter block,
/// with optional overrides for the outputs and targets foreign states use
/// when reading this block's letters.
#[derive(Debug, Clone)]
pub struct CombinePart {
    pub transducer: Transducer,
    /// Inclusive block bounds in the combined alphabet.
    pub block: (Letter, Letter),
    /// Images of this block's letters (in block coordinates) under the
    /// permutation foreign states output; default is the level-1 map.
    pub sigma: Option<Vec<Letter>>,
    /// Target state names foreign states enter per letter of this block;
    /// default is the state each letter fixes.
    pub targets: Option<Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct CombineSpec {
    pub parts: Vec<CombinePart>,
}

impl CombineSpec {
    /// Both machines side by side with default wiring.
    pub fn pair(a: &Transducer, b: &Transducer) -> CombineSpec {
        let na = a.alphabet();
        let nb = b.alphabet();
        CombineSpec {
            parts: vec![
                CombinePart {
                    transducer: a.clone(),
                    block: (0, na - 1),
                    sigma: None,
                    targets: None,
                },
                CombinePart {
                    transducer: b.clone(),
                    block: (na, na + nb - 1),
                    sigma: None,
                    targets: None,
                },
            ],
        }
    }
}

/// Builds the disjoint combination: each part acts natively on its own block;
/// on a foreign block's letters a state outputs that block's permutation and
/// enters that block's target state.
pub fn combine_disjoint(spec: &CombineSpec, caps: &Caps) -> Result<Transducer> {
    if spec.parts.is_empty() {
        return Err(Error::BlockMismatch("no parts".into()));
    }
    // Blocks must tile 0..n contiguously in order.
    let mut expected_lo = 0usize;
    for (i, part) in spec.parts.iter().enumerate() {
        let (lo, hi) = part.block;
        let width = part.transducer.alphabet();
        if lo != expected_lo || hi + 1 != lo + width {
            return Err(Error::BlockMismatch(format!(
                "part {i} covers {lo}..{hi} but must cover {expected_lo}..{}",
                expected_lo + width - 1
            )));
        }
        expected_lo = hi + 1;
    }
    let n = expected_lo;

    // Per part: the fixed state and output of each of its letters.
    struct Wiring {
        /// Per local letter: the state entered by foreign readers.
        target: Vec<StateId>,
        /// Per local letter: the letter output by foreign readers (global).
        output: Vec<Letter>,
    }
    let mut wirings = Vec::with_capacity(spec.parts.len());
    for (i, part) in spec.parts.iter().enumerate() {
        let t = &part.transducer;
        if sync_level(t, caps).is_err() {
            return Err(Error::NotSynchronizingPart(format!("part {i}")));
        }
        let width = t.alphabet();
        let lo = part.block.0;
        let mut fixed = Vec::with_capacity(width);
        for x in 0..width {
            let q = (0..t.state_count())
                .find(|&q| t.next(q, x) == q)
                .ok_or_else(|| {
                    Error::NotSynchronizingPart(format!(
                        "part {i} has no state fixed by letter {x}"
                    ))
                })?;
            fixed.push(q);
        }
        let target = match &part.targets {
            None => fixed.clone(),
            Some(names) => {
                if names.len() != width {
                    return Err(Error::BlockMismatch(format!(
                        "part {i} target vector has {} entries for {width} letters",
                        names.len()
                    )));
                }
                names
                    .iter()
                    .map(|name| {
                        t.state_index(name)
                            .ok_or_else(|| Error::UnknownState(name.clone()))
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        let output = match &part.sigma {
            None => (0..width).map(|x| t.out(fixed[x], x) + lo).collect(),
            Some(images) => {
                if images.len() != width {
                    return Err(Error::BlockMismatch(format!(
                        "part {i} sigma has {} entries for {width} letters",
                        images.len()
                    )));
                }
                let mut seen = vec![false; width];
                for &img in images {
                    if img < lo || img > part.block.1 || seen[img - lo] {
                        return Err(Error::BlockMismatch(format!(
                            "part {i} sigma is not a permutation of its block"
                        )));
                    }
                    seen[img - lo] = true;
                }
                images.clone()
            }
        };
        wirings.push(Wiring { target, output });
    }

    // Unique global state names: keep original names unless they collide.
    let mut names: Vec<String> = Vec::new();
    {
        let mut all: Vec<&str> = Vec::new();
        for part in &spec.parts {
            all.extend(part.transducer.state_names().iter().map(|s| s.as_str()));
        }
        let collide = {
            let mut sorted = all.clone();
            sorted.sort();
            sorted.windows(2).any(|w| w[0] == w[1])
        };
        for (i, part) in spec.parts.iter().enumerate() {
            for name in part.transducer.state_names() {
                names.push(if collide {
                    format!("p{i}_{name}")
                } else {
                    name.clone()
                });
            }
        }
    }

    let mut offsets = Vec::with_capacity(spec.parts.len());
    let mut acc = 0usize;
    for part in &spec.parts {
        offsets.push(acc);
        acc += part.transducer.state_count();
    }
    let count = acc;
    let mut next = vec![0usize; count * n];
    let mut out = vec![0usize; count * n];
    for (i, part) in spec.parts.iter().enumerate() {
        let t = &part.transducer;
        let lo = part.block.0;
        for q in 0..t.state_count() {
            let global_q = offsets[i] + q;
            for x in 0..n {
                let (tgt, o) = if x >= lo && x <= part.block.1 {
                    (offsets[i] + t.next(q, x - lo), t.out(q, x - lo) + lo)
                } else {
                    let j = spec
                        .parts
                        .iter()
                        .position(|p| x >= p.block.0 && x <= p.block.1)
                        .expect("blocks tile the alphabet");
                    let local = x - spec.parts[j].block.0;
                    (
                        offsets[j] + wirings[j].target[local],
                        wirings[j].output[local],
                    )
                };
                next[global_q * n + x] = tgt;
                out[global_q * n + x] = o;
            }
        }
    }
    Ok(Transducer::from_tables(n, names, next, out))
}

/// The two-part combination with level-1-map outputs on foreign letters.
pub fn combine_oplus(a: &Transducer, b: &Transducer, caps: &Caps) -> Result<Transducer> {
    combine_disjoint(&CombineSpec::pair(a, b), caps)
}

/// `minimize(core(h^-1 * t * h))`.
pub fn conjugate(t: &Transducer, h: &Transducer, caps: &Caps) -> Result<Transducer> {
    let hi = h.inverse()?;
    let product = hi.product(t)?.product(h)?;
    Ok(minimize(&core(&product, caps)?).transducer)
}

/// True iff for every word `gamma` of length `k` and every state `q` there is
/// a state `p` whose output of `gamma` forces `q`. This is the hypothesis
/// under which the core of every power is the whole power.
pub fn surjective_output_check(t: &Transducer, k: usize, caps: &Caps) -> Result<bool> {
    let info = sync_analysis(t, caps)?;
    if info.level > k {
        return Err(Error::PreconditionUnmet(format!(
            "check level {k} is below the synchronizing level {}",
            info.level
        )));
    }
    let n = t.alphabet();
    let total = count_words(n, k, caps.word_cap)?;
    let states = t.state_count();
    for rank in 0..total {
        let gamma = Word::from_rank(rank, k, n);
        let mut hit = vec![false; states];
        let mut hits = 0usize;
        for p in 0..states {
            let image = t.read_output(p, gamma.letters());
            let forced = t.read_state(0, &image);
            if !hit[forced] {
                hit[forced] = true;
                hits += 1;
            }
        }
        if hits != states {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Parses a combination spec file: one line per part,
/// `part <file> block=<lo>..<hi> [sigma=<imgs>] [targets=<states>]`,
/// with comma-separated sigma images and target names. The loader resolves
/// part files relative to the spec file's directory.
pub fn parse_combine_spec(
    text: &str,
    load: &mut dyn FnMut(&str) -> Result<Transducer>,
) -> Result<CombineSpec> {
    let mut parts = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let ln = idx + 1;
        let body = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        let mut tokens = body.split_whitespace();
        if tokens.next() != Some("part") {
            return Err(Error::Parse {
                line: ln,
                message: "expected `part <file> ...`".into(),
            });
        }
        let file = tokens.next().ok_or(Error::Parse {
            line: ln,
            message: "missing part file".into(),
        })?;
        let mut block = None;
        let mut sigma = None;
        let mut targets = None;
        for token in tokens {
            if let Some(range) = token.strip_prefix("block=") {
                let (lo, hi) = range.split_once("..").ok_or(Error::Parse {
                    line: ln,
                    message: "expected block=<lo>..<hi>".into(),
                })?;
                let lo = lo.parse().map_err(|_| Error::Parse {
                    line: ln,
                    message: format!("invalid block bound {lo:?}"),
                })?;
                let hi = hi.parse().map_err(|_| Error::Parse {
                    line: ln,
                    message: format!("invalid block bound {hi:?}"),
                })?;
                block = Some((lo, hi));
            } else if let Some(list) = token.strip_prefix("sigma=") {
                let images = list
                    .split(',')
                    .map(|v| {
                        v.parse::<usize>().map_err(|_| Error::Parse {
                            line: ln,
                            message: format!("invalid sigma image {v:?}"),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                sigma = Some(images);
            } else if let Some(list) = token.strip_prefix("targets=") {
                targets = Some(list.split(',').map(str::to_string).collect());
            } else {
                return Err(Error::Parse {
                    line: ln,
                    message: format!("unknown field {token:?}"),
                });
            }
        }
        let block = block.ok_or(Error::Parse {
            line: ln,
            message: "missing block=<lo>..<hi>".into(),
        })?;
        parts.push(CombinePart {
            transducer: load(file)?,
            block,
            sigma,
            targets,
        });
    }
    Ok(CombineSpec { parts })
}
