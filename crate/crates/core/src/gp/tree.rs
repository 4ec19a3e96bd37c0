use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::primitive::Primitive;
use crate::error::{Error, Result};
use crate::sim::FeatureVector;

/// Score assigned whenever a tree evaluates to NaN or an infinity. Dispatch
/// picks the minimum score, so this is always the worst choice.
pub const NON_FINITE_SCORE: f64 = f64::MAX;

/// Hard depth limit applied after every variation operator.
pub const MAX_DEPTH: usize = 10;

/// Expression tree stored in prefix order. A subtree is always a contiguous
/// slice, which keeps crossover and mutation to a pair of splices.
///
/// Depth counts nodes on the longest root-to-leaf path, so a lone terminal
/// has depth 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    nodes: Vec<Primitive>,
}

impl Tree {
    /// Builds a tree from prefix-ordered nodes, checking arities.
    pub fn from_prefix(nodes: Vec<Primitive>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Contract("empty tree".into()));
        }
        let mut open = 1usize;
        for (i, p) in nodes.iter().enumerate() {
            if open == 0 {
                return Err(Error::Contract(format!("trailing nodes after position {i}")));
            }
            open = open - 1 + p.arity();
        }
        if open != 0 {
            return Err(Error::Contract(format!("{open} missing argument(s)")));
        }
        Ok(Self { nodes })
    }

    pub(crate) fn from_prefix_unchecked(nodes: Vec<Primitive>) -> Self {
        debug_assert!(Tree::from_prefix(nodes.clone()).is_ok());
        Self { nodes }
    }

    pub fn terminal(p: Primitive) -> Self {
        assert!(p.is_terminal());
        Self { nodes: vec![p] }
    }

    #[inline]
    pub fn nodes(&self) -> &[Primitive] {
        &self.nodes
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn depth(&self) -> usize {
        let mut stack: Vec<usize> = Vec::with_capacity(self.nodes.len());
        for p in self.nodes.iter().rev() {
            let arity = p.arity();
            let mut d = 0;
            for _ in 0..arity {
                d = d.max(stack.pop().expect("well-formed tree"));
            }
            stack.push(d + 1);
        }
        stack.pop().unwrap_or(0)
    }

    /// One past the last node of the subtree rooted at `start`.
    pub fn subtree_end(&self, start: usize) -> usize {
        let mut open = 1usize;
        let mut i = start;
        while open > 0 {
            open = open - 1 + self.nodes[i].arity();
            i += 1;
        }
        i
    }

    /// Depth of each node position, root = 1.
    pub fn node_levels(&self) -> Vec<usize> {
        let mut levels = Vec::with_capacity(self.nodes.len());
        // (level of parent, children still to visit)
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for p in &self.nodes {
            let level = match stack.last_mut() {
                None => 1,
                Some((parent, left)) => {
                    *left -= 1;
                    *parent + 1
                }
            };
            levels.push(level);
            while matches!(stack.last(), Some((_, 0))) {
                stack.pop();
            }
            if p.arity() > 0 {
                stack.push((level, p.arity()));
            }
        }
        levels
    }

    /// Copy of the subtree rooted at `start`.
    pub fn subtree(&self, start: usize) -> Tree {
        let end = self.subtree_end(start);
        Tree {
            nodes: self.nodes[start..end].to_vec(),
        }
    }

    /// Replaces the subtree rooted at `at` with `replacement`.
    pub fn replace_subtree(&self, at: usize, replacement: &[Primitive]) -> Tree {
        let end = self.subtree_end(at);
        let mut nodes = Vec::with_capacity(self.nodes.len() - (end - at) + replacement.len());
        nodes.extend_from_slice(&self.nodes[..at]);
        nodes.extend_from_slice(replacement);
        nodes.extend_from_slice(&self.nodes[end..]);
        Tree { nodes }
    }

    /// Raw value of the expression, possibly non-finite.
    pub fn evaluate_raw(&self, f: &FeatureVector) -> f64 {
        let mut stack: Vec<f64> = Vec::with_capacity(16);
        for &p in self.nodes.iter().rev() {
            let v = match p {
                Primitive::Add => {
                    let (a, b) = pop2(&mut stack);
                    a + b
                }
                Primitive::Sub => {
                    let (a, b) = pop2(&mut stack);
                    a - b
                }
                Primitive::Mul => {
                    let (a, b) = pop2(&mut stack);
                    a * b
                }
                Primitive::Div => {
                    let (a, b) = pop2(&mut stack);
                    if b == 0.0 {
                        1.0
                    } else {
                        a / b
                    }
                }
                Primitive::Max => {
                    let (a, b) = pop2(&mut stack);
                    if a.is_nan() || b.is_nan() {
                        f64::NAN
                    } else {
                        a.max(b)
                    }
                }
                Primitive::Min => {
                    let (a, b) = pop2(&mut stack);
                    if a.is_nan() || b.is_nan() {
                        f64::NAN
                    } else {
                        a.min(b)
                    }
                }
                Primitive::And => {
                    let (a, b) = pop2(&mut stack);
                    truth(a != 0.0 && b != 0.0)
                }
                Primitive::Or => {
                    let (a, b) = pop2(&mut stack);
                    truth(a != 0.0 || b != 0.0)
                }
                Primitive::IfElse => {
                    let c = stack.pop().expect("well-formed tree");
                    let (a, b) = pop2(&mut stack);
                    if c != 0.0 {
                        a
                    } else {
                        b
                    }
                }
                Primitive::Le => {
                    let (a, b) = pop2(&mut stack);
                    truth(a <= b)
                }
                Primitive::Ge => {
                    let (a, b) = pop2(&mut stack);
                    truth(a >= b)
                }
                terminal => f.value(terminal),
            };
            stack.push(v);
        }
        stack.pop().expect("well-formed tree")
    }

    /// Dispatch score: the expression value with non-finite results mapped to
    /// [`NON_FINITE_SCORE`].
    #[inline]
    pub fn evaluate(&self, f: &FeatureVector) -> f64 {
        let v = self.evaluate_raw(f);
        if v.is_finite() {
            v
        } else {
            NON_FINITE_SCORE
        }
    }

    pub fn to_sexpr(&self) -> String {
        self.to_string()
    }

    pub fn parse_sexpr(text: &str) -> Result<Tree> {
        Parser::new(text).parse()
    }
}

#[inline]
fn truth(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

#[inline]
fn pop2(stack: &mut Vec<f64>) -> (f64, f64) {
    let a = stack.pop().expect("well-formed tree");
    let b = stack.pop().expect("well-formed tree");
    (a, b)
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut open: Vec<usize> = Vec::new();
        for (i, p) in self.nodes.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if p.arity() > 0 {
                write!(f, "({p}")?;
                open.push(p.arity());
                continue;
            }
            f.write_str(p.name())?;
            while let Some(left) = open.last_mut() {
                *left -= 1;
                if *left > 0 {
                    break;
                }
                open.pop();
                f.write_str(")")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree({self})")
    }
}

impl FromStr for Tree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Tree::parse_sexpr(s)
    }
}

impl Serialize for Tree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Tree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Tree::parse_sexpr(&text).map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Self { text, pos: 0 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn atom(&mut self) -> Result<Primitive> {
        let rest = &self.text[self.pos..];
        let len = rest
            .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.err("expected a primitive name"));
        }
        let name = &rest[..len];
        let p = Primitive::from_name(name).ok_or_else(|| self.err(format!("unknown primitive `{name}`")))?;
        self.pos += len;
        Ok(p)
    }

    fn expr(&mut self, out: &mut Vec<Primitive>) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                self.skip_ws();
                let head = self.atom()?;
                if head.is_terminal() {
                    return Err(self.err(format!("terminal `{head}` in function position")));
                }
                out.push(head);
                for _ in 0..head.arity() {
                    self.expr(out)?;
                }
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.err(format!("`{head}` expects {} argument(s)", head.arity())));
                }
                self.pos += 1;
                Ok(())
            }
            Some(_) => {
                let p = self.atom()?;
                if !p.is_terminal() {
                    return Err(self.err(format!("function `{p}` used without arguments")));
                }
                out.push(p);
                Ok(())
            }
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn parse(mut self) -> Result<Tree> {
        let mut nodes = Vec::new();
        self.expr(&mut nodes)?;
        self.skip_ws();
        if self.pos != self.text.len() {
            return Err(self.err("trailing input"));
        }
        Ok(Tree { nodes })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitnessKind {
    True,
    Estimated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fitness {
    pub value: f64,
    pub kind: FitnessKind,
}

impl Fitness {
    pub fn true_value(value: f64) -> Self {
        Self {
            value,
            kind: FitnessKind::True,
        }
    }

    pub fn estimated(value: f64) -> Self {
        Self {
            value,
            kind: FitnessKind::Estimated,
        }
    }
}

/// A dispatching heuristic under evolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub tree: Tree,
    pub fitness: Option<Fitness>,
    pub birth_gen: u32,
}

impl Individual {
    pub fn new(tree: Tree, birth_gen: u32) -> Self {
        Self {
            tree,
            fitness: None,
            birth_gen,
        }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.tree.size()
    }

    #[inline]
    pub fn depth(&self) -> usize {
        self.tree.depth()
    }

    pub fn has_true_fitness(&self) -> bool {
        matches!(self.fitness, Some(Fitness { kind: FitnessKind::True, .. }))
    }
}
