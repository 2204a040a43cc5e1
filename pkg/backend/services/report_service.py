"""
Report Service - loads inputs, runs the analysis and verification pipelines, and renders reports
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, ValidationError

from backend.models.algebra import Rep
from backend.models.errors import InputError
from backend.models.partial_perm import PartialPerm
from backend.models.schemas import (
    AnalysisConfig,
    AnalysisReport,
    ConjugacySection,
    DClassSummary,
    GeneratorFile,
    GreenStructure,
    InvariantStatus,
    RepresentationSection,
    RepresentationSummary,
    SuppliedRepsFile,
    TableSummary,
    VerificationReport,
)
from backend.models.semigroup_table import SemigroupTable
from backend.services.conjugacy_service import ConjugacyService
from backend.services.representation_service import RepresentationService
from backend.services.semigroup_service import SemigroupService
from backend.services.verification_service import VerificationService
from backend.utils.exact_fields import parse_field

logger = logging.getLogger(__name__)


def dump_json(model: BaseModel) -> str:
    """Byte-stable JSON for a report model"""
    return json.dumps(model.model_dump(mode="json"), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


class ReportService:
    def __init__(self, config: AnalysisConfig):
        self.config = config
        self.field = parse_field(config.field)
        self.semigroups = SemigroupService(config.element_cap, config.table_memory_mb)
        self.conjugacy = ConjugacyService(self.semigroups)
        self.representations = RepresentationService(self.field, self.semigroups, config.exhaustive_limit)
        self.verification = VerificationService(config, self.semigroups, self.conjugacy, self.representations)

    # Inputs

    def load_generators(self, path: str) -> GeneratorFile:
        return self._load(path, GeneratorFile)

    def load_supplied(self, path: Optional[str]) -> Optional[SuppliedRepsFile]:
        return self._load(path, SuppliedRepsFile) if path else None

    def _load(self, path: str, schema):
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise InputError(f"Cannot read {path}", str(e))
        try:
            return schema.model_validate_json(text)
        except ValidationError as e:
            raise InputError(f"{path} is not a valid {schema.__name__}", str(e))

    def build_table(self, generators: GeneratorFile) -> SemigroupTable:
        perms = [PartialPerm.from_literal(literal) for literal in generators.generators]
        return self.semigroups.generate(generators.degree, perms, generators.close_under_inverse)

    def input_digest(self, generators: GeneratorFile, supplied: Optional[SuppliedRepsFile]) -> str:
        payload = {
            "input": generators.model_dump(mode="json"),
            "reps": supplied.model_dump(mode="json") if supplied else None,
            "field": self.config.field,
            "skip_reps": self.config.skip_reps,
            "seed": self.config.seed,
            "exhaustive_limit": self.config.exhaustive_limit,
            "sample_pairs": self.config.sample_pairs,
        }
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def _supplied_reps(
        self, table: SemigroupTable, green: GreenStructure, supplied: Optional[SuppliedRepsFile]
    ) -> Optional[Dict[int, List[Rep]]]:
        return self.representations.supplied_reps(table, green, supplied) if supplied else None

    # Pipelines

    def table_summary(self, table: SemigroupTable, green: GreenStructure) -> TableSummary:
        d_classes = []
        for index, e in enumerate(green.lambda_ids):
            subgroup = self.semigroups.maximal_subgroup(table, e, green)
            d_classes.append(
                DClassSummary(
                    index=index,
                    lambda_id=e,
                    rank=int(table.ranks[e]),
                    size=len(green.d_classes[index]),
                    idempotent_count=green.n_e(index),
                    group_order=subgroup.order,
                    group_class_count=len(self.conjugacy.group_conjugacy_classes(table, subgroup)),
                )
            )
        return TableSummary(
            degree=table.degree,
            size=table.size,
            generator_ids=list(table.generator_ids),
            idempotent_count=len(table.idempotent_ids),
            identity_id=table.identity_id,
            lambda_ids=list(green.lambda_ids),
            d_classes=d_classes,
            dimension_audit=self.semigroups.dimension_audit(table, green),
        )

    def analyze(self, generators: GeneratorFile, supplied: Optional[SuppliedRepsFile] = None) -> AnalysisReport:
        """generate → Green structure → conjugacy by every method → lifts → bijection verdict"""
        table = self.build_table(generators)
        self.semigroups.require_inverse(table)
        green = self.semigroups.green_structure(table)
        logger.info("Analyzing %r: |S| = %d, %d D-classes", generators.name, table.size, len(green.d_classes))

        brute = self.conjugacy.s_conjugacy_bruteforce(table)
        structural = self.conjugacy.s_conjugacy_structural(table, green)
        counts = {"brute_force": brute.count, "structural": structural.count}
        g_classes = None
        if table.has_identity:
            g_partition = self.conjugacy.g_conjugacy(table)
            counts["g_conjugacy"] = g_partition.count
            g_classes = g_partition.blocks()
        if self.semigroups.is_full_rook_monoid(table):
            counts["cycle_type"] = self.conjugacy.cycle_type_partition(table).count

        connecting = {}
        for data in self.conjugacy.induced_data(table, green):
            f, e = data.induced_idempotent, data.subrank
            connecting[f"{f}->{e}"] = self.semigroups.connecting_element(table, f, e)

        conjugacy = ConjugacySection(
            counts=counts,
            classes=structural.classes,
            g_classes=g_classes,
            partitions_agree=brute.blocks() == structural.blocks(),
            group_class_sum=self.verification.group_class_sum(table, green),
        )

        representations = None
        lift_count = None
        verdict = InvariantStatus.SKIPPED
        if not self.config.skip_reps:
            lifts = self.representations.all_irreps(table, green, self._supplied_reps(table, green, supplied))
            matrix = self.representations.inequivalence_matrix(lifts)
            summaries = [
                RepresentationSummary(
                    lambda_id=lift.lambda_id,
                    d_class=lift.d_class,
                    label=lift.label,
                    group_degree=lift.source.degree,
                    degree=lift.degree,
                    commutant_dimension=matrix[i][i],
                    irreducible=matrix[i][i] == 1,
                )
                for i, lift in enumerate(lifts)
            ]
            square_sum = sum(lift.degree ** 2 for lift in lifts)
            inequivalent = all(matrix[i][j] == 0 for i in range(len(lifts)) for j in range(len(lifts)) if i != j)
            representations = RepresentationSection(
                field=str(self.field),
                representations=summaries,
                inequivalence_matrix=matrix,
                pairwise_inequivalent=inequivalent,
                degree_square_sum=square_sum,
                degree_identity=square_sum == table.size if self.field.characteristic == 0 else None,
            )
            lift_count = len(lifts)
            certified = all(s.irreducible for s in summaries) and inequivalent
            verdict = InvariantStatus.PASS if certified and lift_count == brute.count else InvariantStatus.FAIL

        return AnalysisReport(
            input_digest=self.input_digest(generators, supplied),
            fixture=generators.name,
            seed=generators.seed,
            audit_seed=self.config.seed,
            table=self.table_summary(table, green),
            connecting_elements=connecting,
            conjugacy=conjugacy,
            representations=representations,
            lift_count=lift_count,
            bijection_verdict=verdict.value,
        )

    def verify(self, generators: GeneratorFile, supplied: Optional[SuppliedRepsFile] = None) -> VerificationReport:
        table = self.build_table(generators)
        self.semigroups.require_inverse(table)
        green = self.semigroups.green_structure(table)
        results = self.verification.verify(table, self._supplied_reps(table, green, supplied))
        failed = any(r.status == InvariantStatus.FAIL for r in results)
        return VerificationReport(
            input_digest=self.input_digest(generators, supplied),
            fixture=generators.name,
            seed=generators.seed,
            audit_seed=self.config.seed,
            size=table.size,
            invariants=results,
            verdict=InvariantStatus.FAIL if failed else InvariantStatus.PASS,
        )

    # Text views

    def summarize_analysis(self, report: AnalysisReport) -> str:
        table = report.table
        lines = [
            f"Semigroup {report.fixture or '(unnamed)'}: |S| = {table.size}, degree {table.degree}",
            f"  D-classes: {len(table.d_classes)}, Λ = {table.lambda_ids}",
        ]
        for d in table.d_classes:
            lines.append(
                f"    rank {d.rank}: size {d.size}, n_e = {d.idempotent_count}, "
                f"|G(e)| = {d.group_order}, group classes {d.group_class_count}"
            )
        counts = ", ".join(f"{method} {count}" for method, count in sorted(report.conjugacy.counts.items()))
        lines.append(f"  Conjugacy classes: {counts}")
        if report.representations is not None:
            degrees = sorted(r.degree for r in report.representations.representations)
            lines.append(
                f"  Irreducible lifts over {report.representations.field}: {report.lift_count}, degrees {degrees}, "
                f"Σ deg² = {report.representations.degree_square_sum}"
            )
        lines.append(f"  Bijection verdict: {report.bijection_verdict}")
        return "\n".join(lines)

    def summarize_verification(self, report: VerificationReport) -> str:
        lines = [f"Verification of {report.fixture or '(unnamed)'} (|S| = {report.size})"]
        for result in report.invariants:
            detail = f" - {result.detail}" if result.detail else ""
            lines.append(f"  [{result.status.value}] {result.name}{detail}")
        lines.append(f"Verdict: {report.verdict.value}")
        return "\n".join(lines)
