"""Large-girth Cayley graphs of SL2(F_p) from symmetric free generating sets in SL2(Z)."""

from .exact2 import A, B, I, J, ExactMatrix, ModMatrix, eval_word, inf_norm, reduce_mod, sigma, tau
from .forge import GeneratorSet, build_genset, enum_omega, margulis_genset, verify_genset
from .girth import CayleySpec, GirthResult, build_gl_spec, cayley_spec, component_size, even_girth, girth_bfs, girth_oracle

__version__ = "0.1.0"
