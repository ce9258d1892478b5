# fracdense/cli.py
"""Linha de comando: ``python -m fracdense <verbo> --config exp.json``.

Saída 0 em sucesso, 2 em falha de pré-condição/configuração, 3 quando a validação ou as
tolerâncias finais falham.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys

import numpy as np
import pandas as pd

from .config import FORMATS, load_config
from .errors import ConfigError, FracDenseError
from .logs import setup_logging
from .norms import (
    gagliardo, hardy_term, kernel_admissibility, kernel_seminorm, local_comparability, weight_condition,
    weighted_gagliardo,
)
from .oracles import jsonable
from .report import emit_report
from .runner import build_experiment, check_tolerances, run_convergence, run_validation
from .smoothing import apply_P, select_eta, uniform_eta

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_PRECONDITION, EXIT_VALIDATION = 0, 2, 3
VERBS = ("whitney", "smooth", "seminorm", "check-weight", "check-kernel", "converge", "validate")


def build_parser():
    parser = argparse.ArgumentParser(prog="fracdense", description="Densidade de funções suaves em W^{s,p}.")
    parser.add_argument("command", choices=VERBS)
    parser.add_argument("--config", help="arquivo JSON do experimento")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", default=None, help="arquivo de saída (padrão: stdout)")
    parser.add_argument("--format", choices=FORMATS, default=None)
    parser.add_argument("--override-precheck", action="store_true")
    parser.add_argument("--quad-order", type=int, default=None)
    parser.add_argument("--max-generation", type=int, default=None)
    parser.add_argument("--points", type=int, default=201, help="pontos da amostragem em 'smooth'")
    parser.add_argument("--quick", action="store_true", help="validação reduzida")
    parser.add_argument("--timing", action="store_true", help="inclui wall_time no relatório")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def _config(args):
    if not args.config:
        raise ConfigError([f"o comando '{args.command}' exige --config"])
    cfg = load_config(args.config)
    return cfg.with_overrides(args.seed, args.quad_order, args.max_generation, args.out, args.format,
                              args.override_precheck)


def _write(texto, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(texto)
    else:
        sys.stdout.write(texto)


def _jsonl(registros):
    return "".join(json.dumps(jsonable(r), sort_keys=True, ensure_ascii=False) + "\n" for r in registros)


# ==================== VERBOS ====================

def cmd_whitney(args):
    exp = build_experiment(_config(args))
    _write(exp.decomp.to_frame().to_csv(index=False, float_format="%.17g", lineterminator="\n"), args.out)
    return EXIT_OK


def cmd_smooth(args):
    cfg = _config(args)
    exp = build_experiment(cfg)
    if cfg.eta.mode == "uniform":
        eta = uniform_eta(exp.decomp, cfg.eta.entries[-1])
    else:
        eta = select_eta(exp.f, exp.pou, cfg.eta.entries[-1], cfg.sobolev.s, cfg.sobolev.p, mode=cfg.eta.target,
                         weight=exp.weight, kernel=exp.kernel, quad=cfg.quadrature, seed=cfg.seed)
    lo, hi = exp.spec.box_lo, exp.spec.box_hi
    t = np.linspace(0.0, 1.0, args.points)[:, None]
    X = lo + t * (hi - lo)
    X = X[exp.region.contains(X)]
    df = pd.DataFrame(X, columns=[f"x_{i}" for i in range(exp.spec.dim)])
    df["f"] = exp.f.values(X)
    df["P_eta_f"] = apply_P(exp.f, exp.pou, eta, X, cfg.quadrature.order)
    _write(df.to_csv(index=False, float_format="%.17g", lineterminator="\n"), args.out)
    return EXIT_OK


def cmd_seminorm(args):
    cfg = _config(args)
    exp = build_experiment(cfg)
    quad = cfg.quadrature
    resultados = [gagliardo(exp.f, exp.spec, exp.params, quad), hardy_term(exp.f, exp.spec, exp.params, quad)]
    if exp.weight is not None:
        resultados.append(weighted_gagliardo(exp.f, exp.spec, exp.params, exp.weight, quad))
    if exp.kernel is not None:
        resultados.append(kernel_seminorm(exp.f, exp.spec, exp.params.p, exp.kernel, quad))
    _write(_jsonl(r.to_dict() for r in resultados), args.out)
    return EXIT_OK


def cmd_check_weight(args):
    cfg = _config(args)
    exp = build_experiment(cfg)
    if exp.weight is None:
        raise ConfigError(["check-weight exige 'weight' na configuração"])
    res = weight_condition(exp.weight, exp.spec, exp.params, cfg.quadrature).to_dict()
    comp = local_comparability(exp.weight, exp.decomp.box(0), seed=cfg.seed)
    res["local_comparability"] = dataclasses.asdict(comp)
    _write(_jsonl([res]), args.out)
    return EXIT_OK


def cmd_check_kernel(args):
    cfg = _config(args)
    exp = build_experiment(cfg)
    if exp.kernel is None:
        raise ConfigError(["check-kernel exige 'kernel' na configuração"])
    res = kernel_admissibility(exp.kernel, exp.spec.dim, exp.params.p, cfg.quadrature).to_dict()
    res["closed_form"] = exp.kernel.admissibility_closed_form(exp.spec.dim, exp.params.p)
    _write(_jsonl([res]), args.out)
    return EXIT_OK


def cmd_converge(args):
    cfg = _config(args)
    linhas = run_convergence(cfg)
    texto = emit_report(linhas, cfg.output_format, None, cfg, include_timing=args.timing)
    _write(texto, cfg.output_path)
    problemas = check_tolerances(linhas, cfg.tolerances)
    for msg in problemas:
        logger.error(msg)
    return EXIT_VALIDATION if problemas else EXIT_OK


def cmd_validate(args):
    seeds = (args.seed,) if args.seed is not None else (1, 2, 3)
    relatorios = run_validation(seeds, quick=args.quick)
    _write("".join(r.to_json() + "\n" for r in relatorios), args.out)
    return EXIT_VALIDATION if any(not r.passed for r in relatorios) else EXIT_OK


COMMANDS = {
    "whitney": cmd_whitney,
    "smooth": cmd_smooth,
    "seminorm": cmd_seminorm,
    "check-weight": cmd_check_weight,
    "check-kernel": cmd_check_kernel,
    "converge": cmd_converge,
    "validate": cmd_validate,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    setup_logging(logging.DEBUG if args.verbose else logging.INFO)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        for v in exc.violations:
            logger.error("config: %s", v)
        return EXIT_PRECONDITION
    except FracDenseError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_PRECONDITION
    except OSError as exc:
        logger.error("E/S: %s", exc)
        return EXIT_PRECONDITION
