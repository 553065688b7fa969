//! Reading and writing Penn-Treebank-style bracketed trees.
//!
//! A file holds any number of trees separated by arbitrary whitespace. The
//! outermost bracket of a tree may be unlabeled, as in `( (S ...) )`; such a
//! wrapper is kept as a node labeled [`TOP_LABEL`]. Labels are stored
//! verbatim, including functional annotations like `NP-SBJ` and escaped
//! tokens like `-LRB-`.

use std::fmt;

use thiserror::Error;

/// Label given to an unlabeled outermost bracket.
pub const TOP_LABEL: &str = "TOP";

/// A labeled ordered tree whose leaves are preterminals (POS tag + word).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SyntaxTree {
    /// A POS tag dominating exactly one word.
    Preterminal { tag: String, word: String },
    /// A phrase node with one or more children.
    Phrase {
        label: String,
        children: Vec<SyntaxTree>,
    },
}

/// One word of a sentence with its tag and 0-based position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TokenLeaf {
    pub form: String,
    pub tag: String,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unclosed bracket ({0} still open at end of input)")]
    Unclosed(usize),
    #[error("unexpected closing bracket")]
    UnexpectedClose,
    #[error("missing phrase label")]
    EmptyLabel,
    #[error("bracket `{0}` has no word or children")]
    EmptyNode(String),
    #[error("preterminal `{0}` has more than one word")]
    MultipleWords(String),
    #[error("node `{0}` mixes bare words and subtrees")]
    MixedChildren(String),
    #[error("text `{0}` outside of any bracket")]
    StrayToken(String),
}

/// Failure to read bracketed input, located by byte offset.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("label `{0}` cannot be written in bracketed form")]
    BadLabel(String),
    #[error("word `{0}` cannot be written in bracketed form")]
    BadWord(String),
    #[error("phrase `{0}` has no children")]
    EmptyPhrase(String),
}

impl SyntaxTree {
    pub fn preterminal(tag: impl Into<String>, word: impl Into<String>) -> Self {
        SyntaxTree::Preterminal {
            tag: tag.into(),
            word: word.into(),
        }
    }

    pub fn phrase(label: impl Into<String>, children: Vec<SyntaxTree>) -> Self {
        SyntaxTree::Phrase {
            label: label.into(),
            children,
        }
    }

    pub fn label(&self) -> &str {
        match self {
            SyntaxTree::Preterminal { tag, .. } => tag,
            SyntaxTree::Phrase { label, .. } => label,
        }
    }

    pub fn is_preterminal(&self) -> bool {
        matches!(self, SyntaxTree::Preterminal { .. })
    }

    /// Number of words under this node.
    pub fn word_count(&self) -> usize {
        match self {
            SyntaxTree::Preterminal { .. } => 1,
            SyntaxTree::Phrase { children, .. } => children.iter().map(Self::word_count).sum(),
        }
    }

    /// Left-to-right preterminals, indexed from 0.
    pub fn leaves(&self) -> Vec<TokenLeaf> {
        let mut out = Vec::with_capacity(self.word_count());
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<TokenLeaf>) {
        match self {
            SyntaxTree::Preterminal { tag, word } => out.push(TokenLeaf {
                form: word.clone(),
                tag: tag.clone(),
                index: out.len(),
            }),
            SyntaxTree::Phrase { children, .. } => {
                for c in children {
                    c.collect_leaves(out);
                }
            }
        }
    }

    /// The word forms in order.
    pub fn words(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_words(&mut out);
        out
    }

    fn collect_words<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            SyntaxTree::Preterminal { word, .. } => out.push(word),
            SyntaxTree::Phrase { children, .. } => {
                for c in children {
                    c.collect_words(out);
                }
            }
        }
    }

    /// Single-line bracketed form. Fails if a label or word would not survive
    /// a round trip (empty, or containing whitespace or brackets).
    pub fn render(&self) -> Result<String, RenderError> {
        let mut out = String::new();
        self.render_into(&mut out)?;
        Ok(out)
    }

    fn render_into(&self, out: &mut String) -> Result<(), RenderError> {
        match self {
            SyntaxTree::Preterminal { tag, word } => {
                if !is_atom(tag) {
                    return Err(RenderError::BadLabel(tag.clone()));
                }
                if !is_atom(word) {
                    return Err(RenderError::BadWord(word.clone()));
                }
                out.push('(');
                out.push_str(tag);
                out.push(' ');
                out.push_str(word);
                out.push(')');
            }
            SyntaxTree::Phrase { label, children } => {
                if !is_atom(label) {
                    return Err(RenderError::BadLabel(label.clone()));
                }
                if children.is_empty() {
                    return Err(RenderError::EmptyPhrase(label.clone()));
                }
                out.push('(');
                out.push_str(label);
                for c in children {
                    out.push(' ');
                    c.render_into(out)?;
                }
                out.push(')');
            }
        }
        Ok(())
    }
}

impl fmt::Display for SyntaxTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.render() {
            Ok(s) => f.write_str(&s),
            Err(_) => write!(f, "{self:?}"),
        }
    }
}

fn is_atom(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || c == '(' || c == ')')
}

/// Extracts the leaves of a tree; see [`SyntaxTree::leaves`].
pub fn leaves(tree: &SyntaxTree) -> Vec<TokenLeaf> {
    tree.leaves()
}

/// Renders a tree on one line; see [`SyntaxTree::render`].
pub fn render_bracketed(tree: &SyntaxTree) -> Result<String, RenderError> {
    tree.render()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Option<(usize, Tok<'a>)> {
        let rest = &self.src[self.pos..];
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
        let start = self.pos;
        let c = trimmed.chars().next()?;
        match c {
            '(' => {
                self.pos += 1;
                Some((start, Tok::Open))
            }
            ')' => {
                self.pos += 1;
                Some((start, Tok::Close))
            }
            _ => {
                let len = trimmed
                    .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
                    .unwrap_or(trimmed.len());
                self.pos += len;
                Some((start, Tok::Atom(&trimmed[..len])))
            }
        }
    }
}

// Partially built node on the parser stack.
struct Frame {
    offset: usize,
    label: Option<String>,
    children: Vec<SyntaxTree>,
    words: Vec<String>,
}

/// Parses every bracketed tree in `input`, in order.
///
/// Whitespace-only input yields no trees.
pub fn parse_bracketed(input: &str) -> Result<Vec<SyntaxTree>, ParseError> {
    let mut lexer = Lexer { src: input, pos: 0 };
    let mut trees = Vec::new();
    let mut stack: Vec<Frame> = Vec::new();

    while let Some((offset, tok)) = lexer.next() {
        match tok {
            Tok::Open => {
                let mut frame = Frame {
                    offset,
                    label: None,
                    children: Vec::new(),
                    words: Vec::new(),
                };
                // The label, if any, directly follows the opening bracket.
                let save = lexer.pos;
                match lexer.next() {
                    Some((_, Tok::Atom(a))) => frame.label = Some(a.to_string()),
                    _ => lexer.pos = save,
                }
                stack.push(frame);
            }
            Tok::Atom(a) => match stack.last_mut() {
                Some(frame) => frame.words.push(a.to_string()),
                None => {
                    return Err(ParseError {
                        offset,
                        kind: ParseErrorKind::StrayToken(a.to_string()),
                    })
                }
            },
            Tok::Close => {
                let frame = stack.pop().ok_or(ParseError {
                    offset,
                    kind: ParseErrorKind::UnexpectedClose,
                })?;
                let outermost = stack.is_empty();
                let node = finish_node(frame, outermost)?;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(node),
                    None => trees.push(node),
                }
            }
        }
    }

    if !stack.is_empty() {
        return Err(ParseError {
            offset: input.len(),
            kind: ParseErrorKind::Unclosed(stack.len()),
        });
    }
    Ok(trees)
}

fn finish_node(frame: Frame, outermost: bool) -> Result<SyntaxTree, ParseError> {
    let Frame {
        offset,
        label,
        children,
        mut words,
    } = frame;
    let label = match label {
        Some(l) => l,
        None if outermost => TOP_LABEL.to_string(),
        None => {
            return Err(ParseError {
                offset,
                kind: ParseErrorKind::EmptyLabel,
            })
        }
    };
    let err = |kind| Err(ParseError { offset, kind });
    match (children.is_empty(), words.len()) {
        (true, 0) => err(ParseErrorKind::EmptyNode(label)),
        (true, 1) => Ok(SyntaxTree::Preterminal {
            tag: label,
            word: words.pop().unwrap(),
        }),
        (true, _) => err(ParseErrorKind::MultipleWords(label)),
        (false, 0) => Ok(SyntaxTree::Phrase { label, children }),
        (false, _) => err(ParseErrorKind::MixedChildren(label)),
    }
}
