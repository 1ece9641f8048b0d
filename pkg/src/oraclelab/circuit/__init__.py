"""Layered oracle circuits."""
from .builder import CircuitBuilder, Signal
from .evaluate import (ALPHA, CONST, NEG_ALPHA, EvalWitness, Nc1Sentence, OracleContext,
                       evaluate, evaluate_nc1_sentence, locv_violations, output_bit)
from .model import (AND, NOT, OR, ORACLE, CircuitError, Gate, LayeredCircuit, fanin2_violations,
                    load_circuit, max_oracle_depth, oheight_ok, oracle_depth, proper_violations,
                    validate_fanin2, validate_proper)
from .universal import UniversalCircuit, compile_universal

__all__ = [
    "ALPHA", "AND", "CONST", "NEG_ALPHA", "NOT", "OR", "ORACLE",
    "CircuitBuilder", "CircuitError", "EvalWitness", "Gate", "LayeredCircuit", "Nc1Sentence",
    "OracleContext", "Signal", "UniversalCircuit", "compile_universal", "evaluate",
    "evaluate_nc1_sentence", "fanin2_violations", "load_circuit", "locv_violations",
    "max_oracle_depth", "oheight_ok", "oracle_depth", "output_bit", "proper_violations",
    "validate_fanin2", "validate_proper",
]
