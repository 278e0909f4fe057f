import csv
import json
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from apps.stats.exceptions import StatsException
from apps.stats.services.rician_service import fit_envelope


class Command(BaseCommand):
    help = "Fit the Rician K-factor (ML and moment method) to a column of amplitude samples"

    def add_arguments(self, parser):
        parser.add_argument(
            "--csv",
            type=str,
            required=True,
            help="CSV file with one amplitude per row; a non-numeric first row is taken as a header.",
        )
        parser.add_argument(
            "--column",
            type=int,
            default=0,
            help="Zero-based column holding the amplitudes.",
        )

    def handle(self, *args, **options):
        amplitudes = self._read(Path(options["csv"]), options["column"])
        try:
            result = fit_envelope(amplitudes)
        except StatsException as exc:
            raise CommandError(str(exc.detail)) from exc
        self.stdout.write(json.dumps(result, indent=2))

    def _read(self, path: Path, column: int) -> list[float]:
        try:
            with path.open(newline="", encoding="utf-8") as handle:
                rows = [row for row in csv.reader(handle) if row]
        except OSError as exc:
            raise CommandError(f"cannot read {path}: {exc}") from exc
        values = []
        for line, row in enumerate(rows, start=1):
            try:
                values.append(float(row[column]))
            except IndexError as exc:
                raise CommandError(f"{path}: line {line} has no column {column}") from exc
            except ValueError as exc:
                if line == 1:
                    continue
                raise CommandError(f"{path}: line {line}: '{row[column]}' is not a number") from exc
        return values
