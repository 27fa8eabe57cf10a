pub mod arith;
pub mod gf;
pub mod poly;
pub mod bifactor;
pub mod sing;
pub mod criteria;
pub mod oracle;
