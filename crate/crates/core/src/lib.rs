pub mod arith;
pub mod hyperterm;
pub mod gosper;
pub mod zeilberger;
pub mod series;
pub mod verify;
