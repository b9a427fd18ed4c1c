//! Variable stories: grammar forms for every node of a bank graph.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{CausalGraph, GraphId};
use crate::error::{Error, Result};

/// Invented words used as variable names in nonsense stories.
pub const NONSENSE_WORDS: &[&str] = &[
    "ziblo", "truq", "fyze", "glimx", "jorv", "wexi", "snov", "yupt", "kraz", "qixy", "vubr",
    "chiz", "pliv", "moxa", "fygo", "rukz", "tasp", "xevo", "jyke", "wibl", "zorf", "quzy",
    "nyrp", "gwex", "smez", "vytz", "hupx", "cwoj", "lirf", "ovka", "pexu", "yigz", "twaz",
    "kwox", "zuph", "fraq", "jyxo", "swoy", "uvzi", "nekl", "gyzp", "rixq", "vwem", "xyfu",
    "blyz", "qwip", "zeku", "tijv", "yomx", "hwaz", "czix", "plof", "muvy", "fyqo", "rujz",
    "tasb", "xevi", "jyka", "wibm", "zorx", "quzw", "nyro", "gwet", "smeu", "vyta", "hupz",
    "cwoi", "lirg", "ovki", "pexy", "yigw", "twac", "kwoz", "zupj", "jyxi", "swoq", "uvzo",
    "nekm", "gyzl", "rixw", "vwen", "xyfo", "blyx", "qwiu", "zeky", "tijw", "yomz", "hwax",
    "czir", "ploz", "muvq", "fyqi", "rujx", "tasn", "xevu", "jyko", "wibp", "zory", "quzt",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Commonsense,
    Anticommonsense,
    Nonsense,
}

impl Sense {
    pub const ALL: [Sense; 3] = [Sense::Commonsense, Sense::Anticommonsense, Sense::Nonsense];

    pub fn as_str(self) -> &'static str {
        match self {
            Sense::Commonsense => "commonsense",
            Sense::Anticommonsense => "anticommonsense",
            Sense::Nonsense => "nonsense",
        }
    }
}

/// The five grammar forms of one binary variable. Index 0 of each pair
/// describes the value 0, index 1 the value 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Forms {
    pub overall: String,
    pub noun: [String; 2],
    pub sent: [String; 2],
    pub attr: [String; 2],
    pub cond: [String; 2],
}

impl Forms {
    /// Forms for an invented word.
    pub fn nonsense(word: &str) -> Forms {
        Forms {
            overall: word.to_string(),
            noun: [format!("not {word}"), word.to_string()],
            sent: [format!("the individual is not {word}"), format!("the individual is {word}")],
            attr: [format!("individuals who are not {word}"), format!("individuals who are {word}")],
            cond: [
                format!("if the individual had not been {word}"),
                format!("if the individual had been {word}"),
            ],
        }
    }

    fn is_complete(&self) -> bool {
        let pairs = [&self.noun, &self.sent, &self.attr, &self.cond];
        !self.overall.trim().is_empty() && pairs.iter().all(|p| p.iter().all(|s| !s.trim().is_empty()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Story {
    pub id: String,
    pub graph: GraphId,
    #[serde(default = "commonsense")]
    pub sense: Sense,
    /// Forms keyed by node symbol (`X`, `Y`, `V2`, ...).
    pub variables: BTreeMap<String, Forms>,
}

fn commonsense() -> Sense {
    Sense::Commonsense
}

impl Story {
    pub fn forms(&self, symbol: &str) -> Result<&Forms> {
        self.variables.get(symbol).ok_or_else(|| Error::MissingForm(format!("{}:{symbol}", self.id)))
    }

    /// Checks that every node of `graph` has all five forms.
    pub fn validate(&self, graph: &CausalGraph) -> Result<()> {
        for name in graph.dag.names() {
            if !self.forms(name)?.is_complete() {
                return Err(Error::MissingForm(format!("{}:{name}", self.id)));
            }
        }
        Ok(())
    }

    /// Swaps in one replacement: either the outcome for an attribute that
    /// is never an effect, or the treatment for an irrelevant variable.
    pub fn anticommonsense<R: Rng + ?Sized>(&self, rng: &mut R) -> Story {
        let bank = bank();
        let (symbol, pool) = if rng.gen_bool(0.5) {
            ("Y", &bank.anti_effects)
        } else {
            ("X", &bank.anti_treatments)
        };
        let mut out = self.clone();
        out.sense = Sense::Anticommonsense;
        out.variables.insert(symbol.to_string(), pool.choose(rng).expect("non-empty pool").clone());
        out
    }

    /// Replaces every variable with a distinct invented word.
    pub fn nonsense<R: Rng + ?Sized>(&self, rng: &mut R) -> Story {
        let words: Vec<&&str> = NONSENSE_WORDS.choose_multiple(rng, self.variables.len()).collect();
        let variables = self.variables.keys().zip(words).map(|(k, w)| (k.clone(), Forms::nonsense(w))).collect();
        Story { id: self.id.clone(), graph: self.graph, sense: Sense::Nonsense, variables }
    }

    pub fn with_sense<R: Rng + ?Sized>(&self, sense: Sense, rng: &mut R) -> Story {
        match sense {
            Sense::Commonsense => self.clone(),
            Sense::Anticommonsense => self.anticommonsense(rng),
            Sense::Nonsense => self.nonsense(rng),
        }
    }
}

#[derive(Debug, Deserialize)]
struct Bank {
    stories: Vec<Story>,
    anti_effects: Vec<Forms>,
    anti_treatments: Vec<Forms>,
}

fn bank() -> &'static Bank {
    static BANK: OnceLock<Bank> = OnceLock::new();
    BANK.get_or_init(|| {
        serde_json::from_str(include_str!("../../data/stories.json")).expect("bundled story bank parses")
    })
}

/// All bundled commonsense stories.
pub fn stories() -> &'static [Story] {
    &bank().stories
}

/// Commonsense stories for one graph, in bank order.
pub fn stories_for(graph: GraphId) -> Vec<&'static Story> {
    stories().iter().filter(|s| s.graph == graph).collect()
}

pub fn anti_effects() -> &'static [Forms] {
    &bank().anti_effects
}

pub fn anti_treatments() -> &'static [Forms] {
    &bank().anti_treatments
}
