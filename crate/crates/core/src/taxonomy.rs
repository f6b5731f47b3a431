//! Tag vocabulary, composite action codes and the dataset hierarchy.
//!
//! Every tag enumeration is a closed set with a canonical short token
//! (`GE`, `RS`, `L2`, ...). The token is the only serialized form, in both
//! the text grammar and the JSON mirror.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A token that does not name any member of the expected tag set.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown {kind} tag `{token}` (expected one of {expected})")]
pub struct UnknownToken {
    pub kind: &'static str,
    pub token: String,
    pub expected: String,
}

macro_rules! token_enum {
    (
        $(#[$meta:meta])*
        $name:ident, $kind:literal {
            $($(#[$vmeta:meta])* $variant:ident => $tok:literal),+ $(,)?
        }
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
        pub enum $name {
            #[default]
            $($(#[$vmeta])* $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn token(self) -> &'static str {
                match self {
                    $($name::$variant => $tok),+
                }
            }

            pub fn from_token(token: &str) -> Result<Self, UnknownToken> {
                match token {
                    $($tok => Ok($name::$variant),)+
                    _ => Err(UnknownToken {
                        kind: $kind,
                        token: token.to_string(),
                        expected: [$($tok),+].join(", "),
                    }),
                }
            }

            pub fn is_none(self) -> bool {
                self == $name::None
            }

            pub fn is_some(self) -> bool {
                !self.is_none()
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.token())
            }
        }

        impl FromStr for $name {
            type Err = UnknownToken;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                Self::from_token(s)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.serialize_str(self.token())
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                let token = String::deserialize(deserializer)?;
                Self::from_token(&token).map_err(serde::de::Error::custom)
            }
        }
    };
}

token_enum! {
    /// Robot motion, classified by the energy that dominates it.
    MotionTag, "motion" {
        None => "N",
        Gravitational => "G",
        GravElastic => "GE",
        Elastic => "E",
        Kinetic => "K",
    }
}

token_enum! {
    /// Prehensile grasp, classified by the geometry it constrains.
    GraspTag, "grasp" {
        None => "N",
        Point => "P",
        Line => "L",
    }
}

token_enum! {
    /// Non-prehensile environment contact.
    EnvContactTag, "environment contact" {
        None => "N",
        Rigid => "R",
        Soft => "S",
        RigidSoft => "RS",
    }
}

token_enum! {
    /// Non-prehensile contact applied by the agent (robot or tool).
    AgentContactTag, "agent contact" {
        None => "N",
        Rigid => "R",
        Soft => "S",
    }
}

token_enum! {
    /// Contact sliding at one contact slot.
    SlidingTag, "sliding" {
        None => "N",
        Active => "A",
        Passive => "P",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArmSide {
    Left,
    Right,
}

impl ArmSide {
    pub const BOTH: [ArmSide; 2] = [ArmSide::Left, ArmSide::Right];

    pub fn name(self) -> &'static str {
        match self {
            ArmSide::Left => "left",
            ArmSide::Right => "right",
        }
    }
}

/// One value per arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PerArm<T> {
    pub left: T,
    pub right: T,
}

impl<T: Copy> PerArm<T> {
    pub fn new(left: T, right: T) -> Self {
        PerArm { left, right }
    }

    pub fn get(&self, side: ArmSide) -> T {
        match side {
            ArmSide::Left => self.left,
            ArmSide::Right => self.right,
        }
    }

    pub fn map<U>(self, mut f: impl FnMut(T) -> U) -> PerArm<U> {
        PerArm {
            left: f(self.left),
            right: f(self.right),
        }
    }
}

/// The three contact-sliding slots, in table order: environment, left, right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SlidingSlots {
    pub env: SlidingTag,
    pub left: SlidingTag,
    pub right: SlidingTag,
}

impl SlidingSlots {
    pub fn arm(&self, side: ArmSide) -> SlidingTag {
        match side {
            ArmSide::Left => self.left,
            ArmSide::Right => self.right,
        }
    }
}

/// A non-bending deformation mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Deformation {
    Compression,
    Tension,
    Torsion,
    Shear,
}

impl Deformation {
    /// Canonical print order.
    pub const ALL: [Deformation; 4] = [
        Deformation::Compression,
        Deformation::Tension,
        Deformation::Torsion,
        Deformation::Shear,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Deformation::Compression => "C",
            Deformation::Tension => "TN",
            Deformation::Torsion => "TR",
            Deformation::Shear => "SH",
        }
    }

    /// Accepts the canonical tokens plus `S` as an alias for shear.
    pub fn from_token(token: &str) -> Result<Self, UnknownToken> {
        match token {
            "C" => Ok(Deformation::Compression),
            "TN" => Ok(Deformation::Tension),
            "TR" => Ok(Deformation::Torsion),
            "SH" | "S" => Ok(Deformation::Shear),
            _ => Err(UnknownToken {
                kind: "deformation",
                token: token.to_string(),
                expected: "N, C, TN, TR, SH".to_string(),
            }),
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

/// Error parsing a deformation expression such as `TN+TR`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeformationParseError {
    #[error(transparent)]
    UnknownTerm(#[from] UnknownToken),
    #[error("deformation `{0}` listed more than once")]
    Duplicate(&'static str),
    #[error("empty deformation term")]
    EmptyTerm,
}

/// Subset of {compression, tension, torsion, shear}. Bending is carried by
/// the separate structured/unstructured levels, never by this set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct DeformationSet(u8);

impl DeformationSet {
    pub const EMPTY: DeformationSet = DeformationSet(0);

    pub fn from_members(members: impl IntoIterator<Item = Deformation>) -> Self {
        let mut set = DeformationSet::EMPTY;
        for m in members {
            set.insert(m);
        }
        set
    }

    pub fn insert(&mut self, d: Deformation) -> bool {
        let fresh = !self.contains(d);
        self.0 |= d.bit();
        fresh
    }

    pub fn contains(&self, d: Deformation) -> bool {
        self.0 & d.bit() != 0
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = Deformation> + '_ {
        Deformation::ALL.into_iter().filter(|d| self.contains(*d))
    }

    /// Parses `N` or `term(+term)*`; terms may come in any order but not twice.
    pub fn parse(text: &str) -> Result<Self, DeformationParseError> {
        if text == "N" {
            return Ok(DeformationSet::EMPTY);
        }
        let mut set = DeformationSet::EMPTY;
        for term in text.split('+') {
            if term.is_empty() {
                return Err(DeformationParseError::EmptyTerm);
            }
            let d = Deformation::from_token(term)?;
            if !set.insert(d) {
                return Err(DeformationParseError::Duplicate(d.token()));
            }
        }
        Ok(set)
    }
}

impl fmt::Display for DeformationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("N");
        }
        for (i, d) in self.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            f.write_str(d.token())?;
        }
        Ok(())
    }
}

impl FromStr for DeformationSet {
    type Err = DeformationParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DeformationSet::parse(s)
    }
}

impl Serialize for DeformationSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DeformationSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        DeformationSet::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Bending level. `Level(0)` is a real bending state, distinct from `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub enum BendLevel {
    #[default]
    None,
    Level(u32),
}

impl BendLevel {
    pub fn is_none(self) -> bool {
        self == BendLevel::None
    }

    pub fn parse(token: &str) -> Result<Self, UnknownToken> {
        if token == "N" {
            return Ok(BendLevel::None);
        }
        token
            .strip_prefix('L')
            .filter(|digits| !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|digits| digits.parse().ok())
            .map(BendLevel::Level)
            .ok_or_else(|| UnknownToken {
                kind: "bending level",
                token: token.to_string(),
                expected: "N, L0, L1, L2, ...".to_string(),
            })
    }
}

impl fmt::Display for BendLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BendLevel::None => f.write_str("N"),
            BendLevel::Level(k) => write!(f, "L{k}"),
        }
    }
}

impl FromStr for BendLevel {
    type Err = UnknownToken;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BendLevel::parse(s)
    }
}

impl Serialize for BendLevel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BendLevel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        BendLevel::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// One complete annotation of a manipulation action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ActionCode {
    pub motion: PerArm<MotionTag>,
    pub grasp: PerArm<GraspTag>,
    pub env: EnvContactTag,
    pub agent: PerArm<AgentContactTag>,
    pub sliding: SlidingSlots,
    pub deformation: DeformationSet,
    pub structured: BendLevel,
    pub unstructured: BendLevel,
}

/// A field position inside an [`ActionCode`]; per-arm fields are split by side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CodeField {
    MotionLeft,
    MotionRight,
    GraspLeft,
    GraspRight,
    Env,
    AgentLeft,
    AgentRight,
    SlidingEnv,
    SlidingLeft,
    SlidingRight,
    Deformation,
    Structured,
    Unstructured,
}

impl CodeField {
    pub fn name(self) -> &'static str {
        match self {
            CodeField::MotionLeft => "motion.left",
            CodeField::MotionRight => "motion.right",
            CodeField::GraspLeft => "grasp.left",
            CodeField::GraspRight => "grasp.right",
            CodeField::Env => "env",
            CodeField::AgentLeft => "agent.left",
            CodeField::AgentRight => "agent.right",
            CodeField::SlidingEnv => "sliding.env",
            CodeField::SlidingLeft => "sliding.left",
            CodeField::SlidingRight => "sliding.right",
            CodeField::Deformation => "deformation",
            CodeField::Structured => "structured",
            CodeField::Unstructured => "unstructured",
        }
    }
}

impl fmt::Display for CodeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl ActionCode {
    /// Field positions at which `self` and `other` differ.
    pub fn diff(&self, other: &ActionCode) -> BTreeSet<CodeField> {
        let checks = [
            (CodeField::MotionLeft, self.motion.left != other.motion.left),
            (
                CodeField::MotionRight,
                self.motion.right != other.motion.right,
            ),
            (CodeField::GraspLeft, self.grasp.left != other.grasp.left),
            (CodeField::GraspRight, self.grasp.right != other.grasp.right),
            (CodeField::Env, self.env != other.env),
            (CodeField::AgentLeft, self.agent.left != other.agent.left),
            (CodeField::AgentRight, self.agent.right != other.agent.right),
            (CodeField::SlidingEnv, self.sliding.env != other.sliding.env),
            (
                CodeField::SlidingLeft,
                self.sliding.left != other.sliding.left,
            ),
            (
                CodeField::SlidingRight,
                self.sliding.right != other.sliding.right,
            ),
            (
                CodeField::Deformation,
                self.deformation != other.deformation,
            ),
            (CodeField::Structured, self.structured != other.structured),
            (
                CodeField::Unstructured,
                self.unstructured != other.unstructured,
            ),
        ];
        checks
            .into_iter()
            .filter_map(|(field, differs)| differs.then_some(field))
            .collect()
    }

    /// Canonical action-ID string, e.g.
    /// `M N N | G P N | NPE R | NPA N N | CS N N N | D C | S L1 | US N`.
    pub fn action_id(&self) -> String {
        format!(
            "M {} {} | G {} {} | NPE {} | NPA {} {} | CS {} {} {} | D {} | S {} | US {}",
            self.motion.left,
            self.motion.right,
            self.grasp.left,
            self.grasp.right,
            self.env,
            self.agent.left,
            self.agent.right,
            self.sliding.env,
            self.sliding.left,
            self.sliding.right,
            self.deformation,
            self.structured,
            self.unstructured,
        )
    }

    /// The code with every deformation field cleared.
    pub fn mask_deformation(&self) -> ActionCode {
        ActionCode {
            deformation: DeformationSet::EMPTY,
            structured: BendLevel::None,
            unstructured: BendLevel::None,
            ..*self
        }
    }

    /// Whether the arm touches the object, prehensile or not.
    pub fn arm_in_contact(&self, side: ArmSide) -> bool {
        self.grasp.get(side).is_some() || self.agent.get(side).is_some()
    }

    /// Contact sources that can hold a deformation in place: both grasps,
    /// both agent contacts and the environment. Gravity is not counted.
    pub fn constraint_sources(&self) -> usize {
        [
            self.grasp.left.is_some(),
            self.grasp.right.is_some(),
            self.agent.left.is_some(),
            self.agent.right.is_some(),
            self.env.is_some(),
        ]
        .into_iter()
        .filter(|b| *b)
        .count()
    }
}

impl fmt::Display for ActionCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.action_id())
    }
}

/// Free-function form of [`ActionCode::diff`].
pub fn code_diff(a: &ActionCode, b: &ActionCode) -> BTreeSet<CodeField> {
    a.diff(b)
}

/// Free-function form of [`ActionCode::action_id`].
pub fn action_id(code: &ActionCode) -> String {
    code.action_id()
}

/// Free-function form of [`ActionCode::mask_deformation`].
pub fn mask_deformation(code: &ActionCode) -> ActionCode {
    code.mask_deformation()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Action {
    pub id: String,
    pub verb: String,
    pub code: ActionCode,
}

/// Dimensionality of the manipulated object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub enum ObjectDim {
    OneD,
    #[default]
    TwoD,
    ThreeD,
}

impl ObjectDim {
    pub const ALL: [ObjectDim; 3] = [ObjectDim::OneD, ObjectDim::TwoD, ObjectDim::ThreeD];

    pub fn token(self) -> &'static str {
        match self {
            ObjectDim::OneD => "1D",
            ObjectDim::TwoD => "2D",
            ObjectDim::ThreeD => "3D",
        }
    }

    pub fn from_token(token: &str) -> Result<Self, UnknownToken> {
        match token {
            "1D" => Ok(ObjectDim::OneD),
            "2D" => Ok(ObjectDim::TwoD),
            "3D" => Ok(ObjectDim::ThreeD),
            _ => Err(UnknownToken {
                kind: "object dimension",
                token: token.to_string(),
                expected: "1D, 2D, 3D".to_string(),
            }),
        }
    }
}

impl fmt::Display for ObjectDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl Serialize for ObjectDim {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.token())
    }
}

impl<'de> Deserialize<'de> for ObjectDim {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let token = String::deserialize(deserializer)?;
        ObjectDim::from_token(&token).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Task {
    pub name: String,
    pub id: String,
    /// Name from the `object` line; empty when the line was omitted.
    #[serde(default)]
    pub object: String,
    #[serde(default)]
    pub object_dim: ObjectDim,
    pub actions: Vec<Action>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Version {
    pub major: u32,
    pub minor: u32,
}

impl Default for Version {
    fn default() -> Self {
        Version { major: 1, minor: 0 }
    }
}

impl fmt::Display for Version {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.major, self.minor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Dataset {
    #[serde(default)]
    pub version: Version,
    pub tasks: Vec<Task>,
}

impl Dataset {
    /// All actions in dataset order, paired with their task.
    pub fn actions(&self) -> impl Iterator<Item = (&Task, &Action)> {
        self.tasks
            .iter()
            .flat_map(|t| t.actions.iter().map(move |a| (t, a)))
    }

    pub fn action_count(&self) -> usize {
        self.tasks.iter().map(|t| t.actions.len()).sum()
    }

    pub fn task(&self, id: &str) -> Option<&Task> {
        self.tasks.iter().find(|t| t.id == id)
    }

    pub fn action(&self, id: &str) -> Option<&Action> {
        self.actions().map(|(_, a)| a).find(|a| a.id == id)
    }
}
