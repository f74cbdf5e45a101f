//! Closed string vocabularies.
//!
//! Every enum-valued field in descriptors, profiles and rulesets is one of the
//! enums declared here. They all serialize as lowercase snake_case strings and
//! parse case-sensitively.

/// Error returned when a string is not a member of a closed vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{value}` is not one of {expected}")]
pub struct UnknownVariant {
    pub value: String,
    pub expected: String,
}

macro_rules! vocab_enum {
    (
        $(#[$meta:meta])*
        pub enum $name:ident { $( $(#[$vmeta:meta])* $variant:ident => $text:literal ),+ $(,)? }
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $( $(#[$vmeta])* $variant ),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[ $( $name::$variant ),+ ];

            pub const fn as_str(self) -> &'static str {
                match self {
                    $( $name::$variant => $text ),+
                }
            }

            pub(crate) fn expected() -> String {
                let names: Vec<&str> = Self::ALL.iter().map(|v| v.as_str()).collect();
                format!("{{{}}}", names.join(", "))
            }
        }

        impl ::std::fmt::Display for $name {
            fn fmt(&self, f: &mut ::std::fmt::Formatter<'_>) -> ::std::fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl ::std::str::FromStr for $name {
            type Err = $crate::vocab::UnknownVariant;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $( $text => Ok($name::$variant), )+
                    _ => Err($crate::vocab::UnknownVariant { value: s.to_string(), expected: Self::expected() }),
                }
            }
        }

        impl serde::Serialize for $name {
            fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.serialize_str(self.as_str())
            }
        }
    };
}

pub(crate) use vocab_enum;

vocab_enum! {
    /// Problem domain, fixed by the nature of the agent and the environment.
    pub enum Domain {
        Unplugged => "unplugged",
        Robotic => "robotic",
        Virtual => "virtual",
    }
}

vocab_enum! {
    /// Algorithmic concept a tool lets the problem solver express.
    pub enum Functionality {
        Variables => "variables",
        Operators => "operators",
        Sequences => "sequences",
        Repetitions => "repetitions",
        Conditionals => "conditionals",
        Functions => "functions",
        Parallelism => "parallelism",
        Events => "events",
    }
}

vocab_enum! {
    pub enum Resettability {
        Direct => "direct",
        Indirect => "indirect",
        None => "none",
    }
}

vocab_enum! {
    pub enum Observability {
        Total => "total",
        Partial => "partial",
        None => "none",
    }
}

vocab_enum! {
    pub enum Cardinality {
        OneToOne => "one_to_one",
        ManyToOne => "many_to_one",
        ManyToMany => "many_to_many",
    }
}

vocab_enum! {
    pub enum Explicitness {
        Explicit => "explicit",
        Implicit => "implicit",
    }
}

vocab_enum! {
    /// Value of the task-constraints dimension.
    pub enum Constraint {
        Constrained => "constrained",
        Unconstrained => "unconstrained",
    }
}

vocab_enum! {
    pub enum Representation {
        ManifestWritten => "manifest_written",
        ManifestNonWritten => "manifest_non_written",
        Latent => "latent",
    }
}

impl Constraint {
    pub fn from_flag(constrained: bool) -> Self {
        if constrained {
            Constraint::Constrained
        } else {
            Constraint::Unconstrained
        }
    }
}

impl Resettability {
    pub fn is_resettable(self) -> bool {
        !matches!(self, Resettability::None)
    }
}

impl Observability {
    pub fn is_observable(self) -> bool {
        !matches!(self, Observability::None)
    }
}

impl Representation {
    pub fn is_manifest(self) -> bool {
        !matches!(self, Representation::Latent)
    }
}

impl Functionality {
    pub(crate) const fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

/// Set of tool functionalities, stored as a bitmask.
///
/// Iteration and serialization follow lexicographic order of the names, which
/// is the canonical order used in every document this crate writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FunctionalitySet(u8);

impl FunctionalitySet {
    pub const EMPTY: FunctionalitySet = FunctionalitySet(0);
    pub const FULL: FunctionalitySet = FunctionalitySet(u8::MAX);

    pub const fn from_bits(bits: u8) -> Self {
        FunctionalitySet(bits)
    }

    pub const fn bits(self) -> u8 {
        self.0
    }

    pub fn contains(self, f: Functionality) -> bool {
        self.0 & f.bit() != 0
    }

    pub fn insert(&mut self, f: Functionality) -> bool {
        let fresh = !self.contains(f);
        self.0 |= f.bit();
        fresh
    }

    pub fn remove(&mut self, f: Functionality) {
        self.0 &= !f.bit();
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: FunctionalitySet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn difference(self, other: FunctionalitySet) -> FunctionalitySet {
        FunctionalitySet(self.0 & !other.0)
    }

    /// Members in lexicographic name order.
    pub fn iter(self) -> impl Iterator<Item = Functionality> {
        let mut sorted: Vec<Functionality> = Functionality::ALL.to_vec();
        sorted.sort_by_key(|f| f.as_str());
        sorted.into_iter().filter(move |f| self.contains(*f))
    }

    /// Every one of the 256 subsets, in bitmask order.
    pub fn all_subsets() -> impl Iterator<Item = FunctionalitySet> {
        (0..=u8::MAX).map(FunctionalitySet)
    }
}

impl FromIterator<Functionality> for FunctionalitySet {
    fn from_iter<I: IntoIterator<Item = Functionality>>(iter: I) -> Self {
        let mut set = FunctionalitySet::EMPTY;
        for f in iter {
            set.insert(f);
        }
        set
    }
}

impl serde::Serialize for FunctionalitySet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|f| f.as_str()))
    }
}
