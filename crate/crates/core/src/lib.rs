pub mod error;
pub mod exactlinalg;
pub mod field;
pub mod par;
pub mod polyring;
pub mod diffop;
pub mod projcoh;
pub mod hypervanish;
pub mod bigprobe;
pub mod fsing;
