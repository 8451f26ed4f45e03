//! Term-specificity control: Resnik information content over a noun/verb
//! taxonomy with corpus frequencies, averaged per post and per user.
//!
//! IC values are natural-log based (nats). A concept's frequency is its own
//! evenly-divided word-count share plus everything below it; the per-pos
//! virtual root has probability 1, so IC(root) = 0 and IC never decreases
//! walking down the tree.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::corpus::UserTimeline;
use crate::error::{Error, Result};
use crate::tokenizer::tokenize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pos {
    Noun,
    Verb,
}

impl Pos {
    pub fn from_tag(s: &str) -> Option<Pos> {
        match s {
            "n" | "noun" => Some(Pos::Noun),
            "v" | "verb" => Some(Pos::Verb),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "n",
            Pos::Verb => "v",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// An is-a taxonomy over noun and verb concepts, with a lemma map from
/// (surface, pos) to concept ids and one virtual root per part of speech.
#[derive(Debug, Clone)]
pub struct Taxonomy {
    names: Vec<String>,
    index: HashMap<String, usize>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    pos: Vec<Option<Pos>>,
    lemmas: HashMap<(String, Pos), Vec<usize>>,
    roots: [usize; 2],
}

impl Taxonomy {
    /// Loads edges (`child\tparent`) and lemmas (`surface\tpos\tconcept`),
    /// attaches parentless concepts to a per-pos virtual root, and
    /// validates acyclicity and consistent parts of speech.
    pub fn load(edges_path: &Path, lemmas_path: &Path) -> Result<Taxonomy> {
        let mut tax = Taxonomy {
            names: Vec::new(),
            index: HashMap::new(),
            parents: Vec::new(),
            children: Vec::new(),
            pos: Vec::new(),
            lemmas: HashMap::new(),
            roots: [0, 0],
        };
        let root_n = tax.intern("__root_n");
        let root_v = tax.intern("__root_v");
        tax.roots = [root_n, root_v];
        tax.pos[root_n] = Some(Pos::Noun);
        tax.pos[root_v] = Some(Pos::Verb);

        let edges = fs::read_to_string(edges_path).map_err(|e| Error::io(edges_path, e))?;
        for (i, line) in edges.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (child, parent) = line.split_once('\t').ok_or_else(|| {
                Error::malformed(edges_path, i + 1, "expected child\\tparent")
            })?;
            let c = tax.intern(child.trim());
            let p = tax.intern(parent.trim());
            if c == p {
                return Err(Error::malformed(edges_path, i + 1, "self-edge"));
            }
            tax.parents[c].push(p);
            tax.children[p].push(c);
        }

        let lemmas = fs::read_to_string(lemmas_path).map_err(|e| Error::io(lemmas_path, e))?;
        for (i, line) in lemmas.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::malformed(
                    lemmas_path,
                    i + 1,
                    "expected surface\\tpos\\tconcept",
                ));
            }
            let pos = Pos::from_tag(cols[1]).ok_or_else(|| {
                Error::malformed(lemmas_path, i + 1, format!("unknown pos {:?}", cols[1]))
            })?;
            let concept = tax.intern(cols[2]);
            tax.lemmas
                .entry((cols[0].to_lowercase(), pos))
                .or_default()
                .push(concept);
            tax.set_pos(concept, pos, lemmas_path, i + 1)?;
        }

        // propagate pos upward so family/root nodes are typed too
        let order = tax.topo_order()?;
        for &c in &order {
            if let Some(p) = tax.pos[c] {
                for &parent in &tax.parents[c].clone() {
                    tax.set_pos(parent, p, lemmas_path, 0)?;
                }
            }
        }

        // attach parentless concepts to their pos root
        for c in 0..tax.names.len() {
            if tax.roots.contains(&c) || !tax.parents[c].is_empty() {
                continue;
            }
            let pos = tax.pos[c].ok_or_else(|| {
                Error::Data(format!(
                    "concept {:?} has no part of speech (no lemma below it)",
                    tax.names[c]
                ))
            })?;
            let root = tax.roots[pos.index()];
            tax.parents[c].push(root);
            tax.children[root].push(c);
        }
        for c in 0..tax.names.len() {
            if tax.pos[c].is_none() {
                return Err(Error::Data(format!(
                    "concept {:?} has no part of speech (no lemma below it)",
                    tax.names[c]
                )));
            }
        }
        Ok(tax)
    }

    fn intern(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        self.parents.push(Vec::new());
        self.children.push(Vec::new());
        self.pos.push(None);
        i
    }

    fn set_pos(&mut self, concept: usize, pos: Pos, path: &Path, line: usize) -> Result<()> {
        match self.pos[concept] {
            None => {
                self.pos[concept] = Some(pos);
                Ok(())
            }
            Some(existing) if existing == pos => Ok(()),
            Some(existing) => Err(Error::malformed(
                path,
                line,
                format!(
                    "concept {:?} is both {} and {}",
                    self.names[concept],
                    existing.as_str(),
                    pos.as_str()
                ),
            )),
        }
    }

    /// Kahn's algorithm over child→parent edges; fails on cycles.
    fn topo_order(&self) -> Result<Vec<usize>> {
        let n = self.names.len();
        let mut out_degree: Vec<usize> = self.children.iter().map(|c| c.len()).collect();
        let mut queue: Vec<usize> = (0..n).filter(|&c| out_degree[c] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(c) = queue.pop() {
            order.push(c);
            for &p in &self.parents[c] {
                out_degree[p] -= 1;
                if out_degree[p] == 0 {
                    queue.push(p);
                }
            }
        }
        if order.len() != n {
            return Err(Error::Data("taxonomy contains a cycle".to_string()));
        }
        Ok(order)
    }

    pub fn concept_id(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn concept_name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn n_concepts(&self) -> usize {
        self.names.len()
    }

    pub fn root(&self, pos: Pos) -> usize {
        self.roots[pos.index()]
    }

    pub fn concepts_for(&self, surface: &str, pos: Pos) -> &[usize] {
        self.lemmas
            .get(&(surface.to_lowercase(), pos))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    fn descendants_or_self(&self, c: usize) -> HashSet<usize> {
        let mut seen = HashSet::new();
        let mut stack = vec![c];
        while let Some(x) = stack.pop() {
            if seen.insert(x) {
                stack.extend(self.children[x].iter().copied());
            }
        }
        seen
    }
}

/// How a word's IC is derived from its senses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SenseIcPolicy {
    /// Most-specific sense: the maximum concept IC.
    MaxIc,
    /// Mean over all senses.
    MeanIc,
}

/// Information content per concept, in nats.
#[derive(Debug, Clone)]
pub struct IcTable {
    ic: Vec<f64>,
    freq: Vec<f64>,
    totals: [f64; 2],
}

/// Builds the Resnik IC table: each word's count is divided evenly among its
/// concepts for that pos, a concept's frequency adds everything below it,
/// and zero-frequency leaves get add-one smoothing before propagation.
pub fn build_ic_table(tax: &Taxonomy, counts: &HashMap<(String, Pos), f64>) -> Result<IcTable> {
    for count in counts.values() {
        if *count < 0.0 {
            return Err(Error::Data(format!("negative corpus count {count}")));
        }
    }
    let n = tax.n_concepts();
    let mut own = vec![0.0f64; n];
    for ((surface, pos), count) in counts {
        let concepts = tax.concepts_for(surface, *pos);
        if concepts.is_empty() {
            continue;
        }
        let share = count / concepts.len() as f64;
        for &c in concepts {
            own[c] += share;
        }
    }
    for c in 0..n {
        if tax.children[c].is_empty() && own[c] == 0.0 {
            own[c] = 1.0;
        }
    }
    let mut freq = vec![0.0f64; n];
    for c in 0..n {
        freq[c] = tax
            .descendants_or_self(c)
            .iter()
            .map(|&d| own[d])
            .sum::<f64>();
    }
    let totals = [freq[tax.root(Pos::Noun)], freq[tax.root(Pos::Verb)]];
    let mut ic = vec![0.0f64; n];
    for c in 0..n {
        let pos = tax.pos[c].expect("typed by construction");
        let total = totals[pos.index()];
        if total <= 0.0 {
            return Err(Error::Data(format!(
                "zero total count for pos {}",
                pos.as_str()
            )));
        }
        ic[c] = -(freq[c] / total).ln().min(0.0);
    }
    Ok(IcTable { ic, freq, totals })
}

impl IcTable {
    pub fn ic(&self, concept: usize) -> f64 {
        self.ic[concept]
    }

    pub fn freq(&self, concept: usize) -> f64 {
        self.freq[concept]
    }

    pub fn total(&self, pos: Pos) -> f64 {
        self.totals[pos.index()]
    }

    /// Word-level IC across the word's senses for this pos; `None` when the
    /// surface maps to no concept.
    pub fn word_ic(
        &self,
        tax: &Taxonomy,
        surface: &str,
        pos: Pos,
        policy: SenseIcPolicy,
    ) -> Option<f64> {
        let concepts = tax.concepts_for(surface, pos);
        if concepts.is_empty() {
            return None;
        }
        let ics = concepts.iter().map(|&c| self.ic[c]);
        Some(match policy {
            SenseIcPolicy::MaxIc => ics.fold(f64::NEG_INFINITY, f64::max),
            SenseIcPolicy::MeanIc => {
                ics.sum::<f64>() / concepts.len() as f64
            }
        })
    }
}

/// Loads `surface\tpos\tcount` rows.
pub fn load_counts(path: &Path) -> Result<HashMap<(String, Pos), f64>> {
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut counts = HashMap::new();
    for (i, line) in content.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 3 {
            return Err(Error::malformed(path, i + 1, "expected surface\\tpos\\tcount"));
        }
        let pos = Pos::from_tag(cols[1])
            .ok_or_else(|| Error::malformed(path, i + 1, format!("unknown pos {:?}", cols[1])))?;
        let count: f64 = cols[2]
            .parse()
            .map_err(|_| Error::malformed(path, i + 1, format!("bad count {:?}", cols[2])))?;
        *counts.entry((cols[0].to_lowercase(), pos)).or_insert(0.0) += count;
    }
    Ok(counts)
}

/// Where part-of-speech tags come from: a unigram most-frequent-tag lexicon
/// applied to our own tokenization, or an externally tagged sidecar file
/// parallel to the corpus.
#[derive(Debug, Clone)]
pub enum TagSource {
    Lexicon(HashMap<String, Pos>),
    /// corpus line number → tagged tokens
    Sidecar(HashMap<usize, Vec<(String, Pos)>>),
}

/// Loads `surface\tpos` rows for the unigram tag lexicon.
pub fn load_tag_lexicon(path: &Path) -> Result<HashMap<String, Pos>> {
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut tags = HashMap::new();
    for (i, line) in content.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (surface, pos) = line
            .split_once('\t')
            .ok_or_else(|| Error::malformed(path, i + 1, "expected surface\\tpos"))?;
        let pos = Pos::from_tag(pos.trim())
            .ok_or_else(|| Error::malformed(path, i + 1, format!("unknown pos {pos:?}")))?;
        tags.insert(surface.to_lowercase(), pos);
    }
    Ok(tags)
}

#[derive(Debug, Deserialize)]
struct SidecarLine {
    tokens: Vec<(String, String)>,
}

/// Loads a JSONL tag sidecar parallel to the corpus file: sidecar line `i`
/// tags corpus line `i`; pos values outside {n, v} are ignored.
pub fn load_tag_sidecar(path: &Path) -> Result<HashMap<usize, Vec<(String, Pos)>>> {
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut map = HashMap::new();
    for (i, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: SidecarLine = serde_json::from_str(line)
            .map_err(|e| Error::malformed(path, i + 1, e.to_string()))?;
        let tokens = parsed
            .tokens
            .into_iter()
            .filter_map(|(tok, pos)| Pos::from_tag(&pos).map(|p| (tok, p)))
            .collect();
        map.insert(i + 1, tokens);
    }
    Ok(map)
}

/// Per-user term-specificity profile; IC fields are undefined when the user
/// has no taggable tokens of that pos.
#[derive(Debug, Clone)]
pub struct SpecificityProfile {
    pub user_id: String,
    pub group: String,
    pub ic_n: Option<f64>,
    pub ic_v: Option<f64>,
    pub n_nouns: usize,
    pub n_verbs: usize,
}

/// Mean IC per post, then mean across posts that have at least one
/// contributing token of the pos.
pub fn user_specificity(
    timeline: &UserTimeline,
    tags: &TagSource,
    tax: &Taxonomy,
    table: &IcTable,
    policy: SenseIcPolicy,
) -> SpecificityProfile {
    let mut post_means: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
    let mut token_counts = [0usize; 2];
    for u in &timeline.utterances {
        let tagged: Vec<(String, Pos)> = match tags {
            TagSource::Lexicon(map) => tokenize(&u.text)
                .into_iter()
                .filter_map(|t| {
                    let key = t.to_lowercase();
                    map.get(&key).map(|&p| (key, p))
                })
                .collect(),
            TagSource::Sidecar(map) => map.get(&u.line_no).cloned().unwrap_or_default(),
        };
        let mut ics: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
        for (token, pos) in tagged {
            if let Some(ic) = table.word_ic(tax, &token, pos, policy) {
                ics[pos.index()].push(ic);
            }
        }
        for pos in [Pos::Noun, Pos::Verb] {
            let i = pos.index();
            if !ics[i].is_empty() {
                token_counts[i] += ics[i].len();
                post_means[i].push(ics[i].iter().sum::<f64>() / ics[i].len() as f64);
            }
        }
    }
    let user_mean = |i: usize| {
        if post_means[i].is_empty() {
            None
        } else {
            Some(post_means[i].iter().sum::<f64>() / post_means[i].len() as f64)
        }
    };
    SpecificityProfile {
        user_id: timeline.user_id.clone(),
        group: timeline.group.clone(),
        ic_n: user_mean(0),
        ic_v: user_mean(1),
        n_nouns: token_counts[0],
        n_verbs: token_counts[1],
    }
}

impl SpecificityProfile {
    pub fn metrics(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        if let Some(v) = self.ic_n {
            m.insert("ic_n".to_string(), v);
        }
        if let Some(v) = self.ic_v {
            m.insert("ic_v".to_string(), v);
        }
        m
    }
}
