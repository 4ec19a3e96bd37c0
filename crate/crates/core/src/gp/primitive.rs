use std::fmt;

/// Every node label a dispatching tree may contain. The discriminant order is
/// canonical: terminals first, then functions, and it fixes the layout of
/// genotypic characterization vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Primitive {
    // terminals
    TravelTime,
    CraneTrucks,
    OperationType,
    StartNodeTrucks,
    EndNodeTrucks,
    StartNodeWaiting,
    EndNodeWaiting,
    DispatchType,
    RemainingTasks,
    AvgLoadTime,
    AvgUnloadTime,
    // functions
    Add,
    Sub,
    Mul,
    Div,
    Max,
    Min,
    And,
    Or,
    IfElse,
    Le,
    Ge,
}

pub const NUM_TERMINALS: usize = 11;
pub const NUM_FUNCTIONS: usize = 11;
/// Length of a genotypic characterization vector.
pub const NUM_PRIMITIVES: usize = NUM_TERMINALS + NUM_FUNCTIONS;

impl Primitive {
    pub const ALL: [Primitive; NUM_PRIMITIVES] = [
        Primitive::TravelTime,
        Primitive::CraneTrucks,
        Primitive::OperationType,
        Primitive::StartNodeTrucks,
        Primitive::EndNodeTrucks,
        Primitive::StartNodeWaiting,
        Primitive::EndNodeWaiting,
        Primitive::DispatchType,
        Primitive::RemainingTasks,
        Primitive::AvgLoadTime,
        Primitive::AvgUnloadTime,
        Primitive::Add,
        Primitive::Sub,
        Primitive::Mul,
        Primitive::Div,
        Primitive::Max,
        Primitive::Min,
        Primitive::And,
        Primitive::Or,
        Primitive::IfElse,
        Primitive::Le,
        Primitive::Ge,
    ];

    pub const TERMINALS: &'static [Primitive] = {
        let (t, _) = Primitive::ALL.split_at(NUM_TERMINALS);
        t
    };

    pub const FUNCTIONS: &'static [Primitive] = {
        let (_, f) = Primitive::ALL.split_at(NUM_TERMINALS);
        f
    };

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn arity(self) -> usize {
        match self {
            Primitive::IfElse => 3,
            p if p.is_terminal() => 0,
            _ => 2,
        }
    }

    #[inline]
    pub fn is_terminal(self) -> bool {
        self.index() < NUM_TERMINALS
    }

    pub fn name(self) -> &'static str {
        match self {
            Primitive::TravelTime => "TT",
            Primitive::CraneTrucks => "CTN",
            Primitive::OperationType => "OT",
            Primitive::StartNodeTrucks => "SNTN",
            Primitive::EndNodeTrucks => "ENTN",
            Primitive::StartNodeWaiting => "SNWTN",
            Primitive::EndNodeWaiting => "ENWTN",
            Primitive::DispatchType => "DT",
            Primitive::RemainingTasks => "RTN",
            Primitive::AvgLoadTime => "ALT",
            Primitive::AvgUnloadTime => "AUT",
            Primitive::Add => "+",
            Primitive::Sub => "-",
            Primitive::Mul => "*",
            Primitive::Div => "/",
            Primitive::Max => "max",
            Primitive::Min => "min",
            Primitive::And => "&",
            Primitive::Or => "|",
            Primitive::IfElse => "if_else",
            Primitive::Le => "<=",
            Primitive::Ge => ">=",
        }
    }

    pub fn from_name(name: &str) -> Option<Primitive> {
        Primitive::ALL.iter().copied().find(|p| p.name() == name)
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
