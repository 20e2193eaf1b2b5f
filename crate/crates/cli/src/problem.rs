//! JSON problem descriptions.

use std::collections::BTreeMap;

use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Problem {
    pub space: SpaceSpec,
    #[serde(default)]
    pub compacts: BTreeMap<String, CompactSpec>,
    #[serde(default)]
    pub function: Option<FunctionSpec>,
    pub command: Command,
    #[serde(default)]
    pub params: Params,
}

/// `"R"` or `{"Rn": d}`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum SpaceSpec {
    Named(String),
    Box {
        #[serde(rename = "Rn")]
        dim: usize,
    },
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CompactSpec {
    Points(Vec<PointSpec>),
    NetOfBox {
        #[serde(rename = "box")]
        bounds: Vec<(String, String)>,
        spacing: String,
    },
    Union(Vec<CompactSpec>),
    /// Another named compact.
    Ref(String),
}

/// `"1/2"` on the real line, `["1/2", "3"]` in general.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Scalar(String),
    Coords(Vec<String>),
}

/// One real-valued expression, or an array of them for an `R^m` codomain.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum FunctionSpec {
    Components(Vec<FnExpr>),
    Single(FnExpr),
}

/// Expression text such as `"abs(x - 1/2)"`, or an explicit syntax tree.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum FnExpr {
    Text(String),
    Node(Box<FnNode>),
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FnNode {
    Var(usize),
    Const(String),
    Add(FnExpr, FnExpr),
    Sub(FnExpr, FnExpr),
    Neg(FnExpr),
    Abs(FnExpr),
    Min(FnExpr, FnExpr),
    Max(FnExpr, FnExpr),
    Scale(String, FnExpr),
    DistTo(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Dist,
    Sup,
    Inf,
    Union,
    Split,
    Image,
    Modulus,
    Member,
    Check,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Dist => "dist",
            Command::Sup => "sup",
            Command::Inf => "inf",
            Command::Union => "union",
            Command::Split => "split",
            Command::Image => "image",
            Command::Modulus => "modulus",
            Command::Member => "member",
            Command::Check => "check",
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Name of the first compact operand.
    pub a: Option<String>,
    /// Name of the second compact operand.
    pub b: Option<String>,
    pub eps: Option<String>,
    pub tol: Option<String>,
    pub delta: Option<String>,
    pub x: Option<PointSpec>,
    pub budget: Option<u32>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}
