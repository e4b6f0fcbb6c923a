"""
Command Line Interface for covred
واجهة سطر الأوامر: التصنيف والتحقق والأطلس والمثال المحلول
"""

import sys
import json
import argparse
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import yaml
from colorama import Fore, Style, init as colorama_init

from covred import __version__
from covred.arithmetic.newton import PolynomialV, newton_polygon
from covred.config import get_setting, load_settings
from covred.covers.branch_tree import BranchClassification, Tail, build_branch_tree, classify_points
from covred.covers.cover import Cover, RamificationData, branch_data, normalize
from covred.database.db_manager import DatabaseManager
from covred.errors import CoverReductionError, NotSimpleReduction, SchemaError
from covred.oracle.blowup import verify_instance
from covred.oracle.planted import verify_with_base_change
from covred.reduction.classifier import Mode, assemble_full_model, classify_tail
from covred.reports.atlas import build_atlas
from covred.reports.example import worked_example_models, write_worked_example

logger = logging.getLogger(__name__)

EXIT_DISAGREE = 5


def _fraction(text, what: str) -> Fraction:
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise SchemaError(f"{what} must be a rational 'a/b', got {text!r}") from e


def _pair(value) -> Tuple[str, str]:
    items = value.split(",") if isinstance(value, str) else list(value)
    if len(items) != 2:
        raise SchemaError(f"a pair needs exactly two labels, got {value!r}")
    return tuple(sorted(str(item).strip() for item in items))


@dataclass
class InstanceFile:
    """
    وصف مثال: الوضع الدقيق (نقاط حرجة) أو وضع الصيغ (مظاهر وسماكات)

    Args:
        mode: exact أو formula
        p: الدرجة الأولية
        e: دليل التفرع
        cover: التغطية (الوضع الدقيق)
        profiles: المظاهر لكل اسم (وضع الصيغ)
        tails: أزواج الذيول مع سماكاتها (وضع الصيغ)
        pair: الزوج المطلوب أو None للكل
        raw: المدخلات كما قُرئت
    """

    mode: Mode
    p: int
    e: int
    cover: Optional[Cover] = None
    profiles: Optional[Dict[str, Tuple[int, ...]]] = None
    tails: List[Tuple[Tuple[str, str], Fraction]] = field(default_factory=list)
    pair: Optional[Tuple[str, str]] = None
    raw: Dict = field(default_factory=dict)

    @classmethod
    def from_mapping(cls, data: Dict, mode: Mode) -> "InstanceFile":
        """
        التحقق من تطابق الوضع مع الحقول

        Raises:
            SchemaError
        """
        if not isinstance(data, dict):
            raise SchemaError("instance file must contain a mapping")
        try:
            p = int(data.get("p", get_setting("field.p", 5)))
            e = int(data.get("e", get_setting("field.e", 1)))
        except (TypeError, ValueError) as err:
            raise SchemaError(f"p and e must be integers: {err}") from err
        pair = data.get("pair")
        pair = None if pair in (None, "all") else _pair(pair)

        if mode is Mode.EXACT:
            if "critical" not in data or "profiles" in data:
                raise SchemaError("exact mode needs 'critical' points and no 'profiles'")
            cover = Cover.from_json({"p": p, "e": e, "critical": data["critical"]})
            return cls(mode=mode, p=p, e=e, cover=cover, pair=pair, raw=dict(data))

        if "profiles" not in data or "critical" in data:
            raise SchemaError("formula mode needs 'profiles' and no 'critical' points")
        try:
            profiles = {
                str(label): tuple(int(m) for m in prof) for label, prof in data["profiles"].items()
            }
        except (AttributeError, TypeError, ValueError) as err:
            raise SchemaError(f"malformed profiles: {err}") from err
        tails = []
        for item in data.get("tails", []) or []:
            if not isinstance(item, dict) or "pair" not in item or "epsilon" not in item:
                raise SchemaError(f"tail entries need 'pair' and 'epsilon': {item!r}")
            tails.append((_pair(item["pair"]), _fraction(item["epsilon"], "epsilon")))
        return cls(mode=mode, p=p, e=e, profiles=profiles, tails=tails, pair=pair, raw=dict(data))

    @classmethod
    def load(cls, path: str, mode: Mode) -> "InstanceFile":
        """قراءة ملف JSON أو YAML"""
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = yaml.safe_load(fh)
        except OSError as err:
            raise SchemaError(f"cannot read {path}: {err}") from err
        except yaml.YAMLError as err:
            raise SchemaError(f"cannot parse {path}: {err}") from err
        return cls.from_mapping(data, mode)


class CovredCLI:
    """واجهة سطر الأوامر لـ covred"""

    def __init__(self, args: argparse.Namespace):
        """تهيئة الواجهة من الوسائط"""
        self.args = args
        self.emit = getattr(args, "emit", None) or get_setting("output.emit", "json")
        self.indent = int(get_setting("output.indent", 2))

    # --- helpers ---

    def _instance(self) -> InstanceFile:
        args = self.args
        if bool(args.cover) == bool(args.profiles):
            raise SchemaError("give exactly one of --cover FILE or --profiles FILE")
        if args.cover:
            inst = InstanceFile.load(args.cover, Mode.EXACT)
        else:
            inst = InstanceFile.load(args.profiles, Mode.FORMULA)
        if args.pair:
            inst.pair = _pair(args.pair)
        if args.epsilon is not None:
            if inst.mode is Mode.EXACT:
                raise SchemaError("--epsilon is a formula-mode flag; exact mode computes eps")
            if inst.pair is None:
                raise SchemaError("--epsilon needs --pair")
            eps = _fraction(args.epsilon, "--epsilon")
            inst.tails = [t for t in inst.tails if t[0] != inst.pair] + [(inst.pair, eps)]
        return inst

    def _print(self, report: Dict, models) -> None:
        if self.emit in ("json", "both"):
            print(json.dumps(report, indent=self.indent, sort_keys=True, ensure_ascii=False))
        if self.emit in ("dot", "both"):
            for k, model in enumerate(models, start=1):
                print(model.to_dot(f"model {k}"), end="")

    def _store(self, command: str, raw: Dict, report: Dict, verdict: Optional[str] = None) -> None:
        if not (self.args.store or get_setting("database.enabled", False)):
            return
        with DatabaseManager(get_setting("database.path", "data/covred.db")) as db:
            run_id = db.save_run(command, raw, report, verdict)
        print(f"{Fore.CYAN}stored as run {run_id}{Style.RESET_ALL}", file=sys.stderr)

    def _exact_inputs(self, inst: InstanceFile):
        normalized = normalize(inst.cover)
        cover = normalized.cover
        ram = branch_data(cover)
        tree = build_branch_tree(ram.values(), cover.ctx)
        return normalized, cover, ram, tree

    # --- commands ---

    def run_classify(self) -> int:
        """
        تشغيل المصنف وإرجاع رمز الخروج
        """
        inst = self._instance()
        report: Dict = {"input": inst.raw, "mode": inst.mode.value}
        if inst.mode is Mode.EXACT:
            normalized, cover, ram, tree = self._exact_inputs(inst)
            bc = classify_points(tree)
            report["normalization"] = {
                "change": normalized.change.to_json(),
                "normalized": normalized.normalized,
            }
            if self.args.emit_branch_tree:
                report["branch_tree"] = tree.to_dict()
            if self.args.emit_newton:
                report["newton"] = {
                    f.label: newton_polygon(cover.beta - PolynomialV((f.value,), cover.ctx)).to_dict()
                    for f in ram.fibers
                }
        else:
            ram = RamificationData.from_profiles(inst.p, inst.profiles)
            bc = BranchClassification.from_tails(ram.labels, [Tail(pair, eps) for pair, eps in inst.tails])

        if not bc.simple:
            raise NotSimpleReduction(
                f"branch locus is not of simple reduction (cluster {bc.offending})",
                cluster=bc.offending,
            )
        report["ramification"] = ram.to_json()
        report["branch_classification"] = bc.to_dict()
        tails = [t for t in bc.tails if inst.pair is None or t.pair == inst.pair]
        report["tails"] = [
            classify_tail(ram, t.pair[0], t.pair[1], t.epsilon, Mode.FORMULA, bc=bc).to_dict()
            for t in tails
        ]
        models = assemble_full_model(ram, bc, Mode.FORMULA)
        report["models"] = [m.to_dict() for m in models]
        self._print(report, models)
        self._store("classify", inst.raw, report)
        return 0

    def run_verify(self) -> int:
        """
        تشغيل المتحقق والمصنف معاً؛ 0 عند التطابق و 5 عند الاختلاف
        """
        inst = self._instance()
        if inst.mode is not Mode.EXACT:
            raise SchemaError("verify needs an exact-mode --cover file")
        normalized, cover, _, _ = self._exact_inputs(inst)
        if self.args.auto_extend:
            verdict = verify_with_base_change(cover)
        else:
            verdict = verify_instance(cover)
        if self.args.trace:
            for entry in verdict.trace:
                print(json.dumps(entry, sort_keys=True, ensure_ascii=False))
        report = {
            "input": inst.raw,
            "mode": inst.mode.value,
            "normalization": {"change": normalized.change.to_json(), "normalized": normalized.normalized},
            **verdict.to_dict(),
            "models": [verdict.observed.to_dict()],
        }
        if verdict.expected is not None:
            report["expected"] = verdict.expected.to_dict()
        self._print(report, [verdict.observed])
        color = Fore.GREEN if verdict.agree else Fore.RED
        print(f"{color}{verdict.label}{Style.RESET_ALL}", file=sys.stderr)
        self._store("verify", inst.raw, report, verdict.label)
        return 0 if verdict.agree else EXIT_DISAGREE

    def run_atlas(self) -> int:
        """طباعة الأطلس أو كتابته في --out"""
        atlas = build_atlas(self.args.p, self.args.r_max)
        if self.args.out:
            out = Path(self.args.out)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"atlas_p{atlas.p}.md").write_text(atlas.to_markdown(), encoding="utf-8")
            (out / f"atlas_p{atlas.p}.json").write_text(atlas.to_json(self.indent) + "\n", encoding="utf-8")
            print(f"{Fore.GREEN}atlas written to {out}{Style.RESET_ALL}", file=sys.stderr)
        elif self.args.emit == "json":
            print(atlas.to_json(self.indent))
        else:
            print(atlas.to_markdown(), end="")
        return 0

    def run_example(self) -> int:
        """النماذج التسعة للمثال المحلول"""
        if self.args.out:
            written = write_worked_example(self.args.out, self.indent)
            print(f"{Fore.GREEN}{len(written)} files written to {self.args.out}{Style.RESET_ALL}", file=sys.stderr)
            return 0
        models = worked_example_models()
        for name, model in models:
            model.meta["name"] = name
        report = {"models": [m.to_dict() for _, m in models]}
        self._print(report, [m for _, m in models])
        return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covred",
        description="covred - semi-stable reduction of degree-p polynomial covers",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  covred classify --profiles tail.yaml --pair 0,lambda --epsilon 7
  covred classify --cover cover.json --emit-branch-tree
  covred verify --cover cover.json --trace
  covred atlas --p 5 --r-max 4
  covred example --out reports/
        """
    )
    parser.add_argument('--version', action='version', version=f'covred v{__version__}')
    parser.add_argument('--config', help='settings file (default config/settings.yaml)')

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--emit', choices=['json', 'dot', 'both'], help='output format')
    common.add_argument('--out', help='output directory')

    instance = argparse.ArgumentParser(add_help=False)
    instance.add_argument('--cover', help='exact-mode instance (critical points)')
    instance.add_argument('--profiles', help='formula-mode instance (profiles and tails)')
    instance.add_argument('--pair', help='tail pair "l1,l2"')
    instance.add_argument('--epsilon', help='tail thickness a/b (formula mode)')
    instance.add_argument('--store', action='store_true', help='save the report in the database')

    sub = parser.add_subparsers(dest='command', required=True)

    classify = sub.add_parser('classify', parents=[common, instance], help='closed-form classification')
    classify.add_argument('--emit-newton', action='store_true', help='Newton polygons of beta - lambda')
    classify.add_argument('--emit-branch-tree', action='store_true', help='metric branch tree')

    verify = sub.add_parser('verify', parents=[common, instance], help='blow-up oracle vs classifier')
    verify.add_argument('--trace', action='store_true', help='blow-up stages as JSON lines')
    verify.add_argument('--auto-extend', action='store_true', help='enlarge e automatically')

    atlas = sub.add_parser('atlas', parents=[common], help='enumerate reduction types')
    atlas.add_argument('--p', type=int, default=5)
    atlas.add_argument('--r-max', dest='r_max', type=int, default=4)

    sub.add_parser('example', parents=[common], help='the nine worked-example models')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """الدالة الرئيسية"""
    parser = build_parser()
    args = parser.parse_args(argv)

    load_settings(args.config)
    logging.basicConfig(
        level=str(get_setting("logging.level", "WARNING")).upper(),
        format=get_setting("logging.format"),
    )
    colorama_init()

    cli = CovredCLI(args)
    handlers = {
        'classify': cli.run_classify,
        'verify': cli.run_verify,
        'atlas': cli.run_atlas,
        'example': cli.run_example,
    }
    try:
        return handlers[args.command]()
    except NotSimpleReduction as e:
        logger.error(f"Not simple reduction: {e}")
        print(f"{Fore.RED}not simple reduction at cluster {e.cluster}: {e}{Style.RESET_ALL}", file=sys.stderr)
        return e.exit_code
    except CoverReductionError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"{Fore.RED}{type(e).__name__}: {e}{Style.RESET_ALL}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.error(f"Fatal error: {e}")
        print(f"خطأ: {e}", file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
