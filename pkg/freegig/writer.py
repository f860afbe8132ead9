import csv
import json
import logging
import os
import os.path
import traceback

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .utils import format_float, open_filename  # noqa: E402

log = logging.getLogger(__name__)

matplotlib.rcParams['svg.hashsalt'] = 'freegig'


def _cell(value):
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return str(value)


class ArtifactWriter:
    """Write experiment artifacts to a directory

    Reports go to JSON, residuals and tables to CSV with 17 significant
    digits, and spectra to SVG histograms with density overlays.
    """

    def __init__(self, outdir):
        self.outdir = outdir
        if not os.path.exists(self.outdir):
            os.makedirs(self.outdir)
        if not os.access(self.outdir, os.W_OK):
            raise PermissionError('output directory is not writable: %r'
                                  % self.outdir)
        self.written = []
        return

    def _path(self, name):
        path = os.path.join(self.outdir, name)
        self.written.append(path)
        log.info('writing %s', path)
        return path

    def write_json(self, name, obj):
        with open_filename(self._path(name), 'w', encoding='utf-8') as fp:
            json.dump(obj, fp, indent=2, sort_keys=True)
            fp.write('\n')
        return

    def write_csv(self, name, header, rows):
        with open_filename(self._path(name), 'w', encoding='utf-8',
                           newline='') as fp:
            w = csv.writer(fp, lineterminator='\n')
            w.writerow(header)
            for row in rows:
                w.writerow([_cell(v) for v in row])
        return

    def write_histogram(self, name, eigenvalues, grid=None, density=None,
                        title=None):
        fig = plt.figure(figsize=(6, 4))
        try:
            ax = fig.add_subplot(1, 1, 1)
            ax.hist(eigenvalues, bins=max(10, int(np.sqrt(len(eigenvalues)))),
                    density=True, color='0.75', edgecolor='0.4',
                    label='eigenvalues')
            if grid is not None:
                ax.plot(grid, density, color='C0', label='limit density')
            ax.set_xlabel('x')
            ax.legend()
            if title:
                ax.set_title(title)
            fig.savefig(self._path(name), format='svg',
                        metadata={'Date': None})
        finally:
            plt.close(fig)
        return

    def write_curves(self, name, header, rows, title=None):
        data = np.array(rows, dtype=float)
        fig = plt.figure(figsize=(6, 4))
        try:
            ax = fig.add_subplot(1, 1, 1)
            for k in range(1, data.shape[1]):
                ax.plot(data[:, 0], data[:, k], label=header[k])
            ax.set_xlabel(header[0])
            ax.legend()
            if title:
                ax.set_title(title)
            fig.savefig(self._path(name), format='svg',
                        metadata={'Date': None})
        finally:
            plt.close(fig)
        return

    def write_report(self, report):
        """report.json, residuals.csv, one CSV per table and the plots."""
        self.write_json('report.json', report.to_dict())
        self.write_csv('residuals.csv', ('check', 'value', 'tolerance',
                                         'pass'),
                       [(r.name, r.value, r.tolerance, r.passed)
                        for r in report.residuals])
        for (name, (header, rows)) in sorted(report.tables.items()):
            self.write_csv('%s.csv' % name, header, rows)
        for (name, (header, rows)) in sorted(report.tables.items()):
            if not name.startswith('esd'):
                continue
            overlay = report.tables.get('density' + name[3:])
            (grid, density) = (None, None)
            if overlay is not None and overlay[1]:
                data = np.array(overlay[1], dtype=float)
                (grid, density) = (data[:, 0], data[:, 1])
            self.write_histogram('%s.svg' % name, [r[0] for r in rows],
                                 grid, density,
                                 title='%s %s' % (report.experiment, name))
        if 'density' in report.tables and 'esd' not in report.tables:
            (header, rows) = report.tables['density']
            if rows:
                self.write_curves('density.svg', header, rows,
                                  title=report.experiment)
        return

    def write_error(self, exc, experiment=None):
        """error.json naming the exception and the files written so far."""
        self.write_json('error.json', {
            'experiment': experiment,
            'error': exc.__class__.__name__,
            'message': str(exc),
            'traceback': traceback.format_exception_only(type(exc), exc),
            'artifacts': [os.path.basename(p) for p in self.written],
        })
        return
