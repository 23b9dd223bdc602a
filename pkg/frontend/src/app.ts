/** Application bootstrap: create a session, load a dataset and chart specs,
 * then wire the fact-card gallery to the organization panel. */

import { ApiClient } from "./api.js";
import { FactCardGallery } from "./factCards.js";
import { OutlinePanel } from "./outline.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function loadCharts(
  api: ApiClient,
  gallery: FactCardGallery,
  chartFiles: FileList,
): Promise<void> {
  for (const file of Array.from(chartFiles)) {
    const doc = JSON.parse(await file.text());
    if (!doc.id) doc.id = file.name.replace(/\.json$/, "");
    const mined = await api.addChart(doc);
    gallery.addChart(mined.chart_id, mined.facts);
  }
}

async function boot(): Promise<void> {
  const form = el<HTMLFormElement>("load-form");
  const galleryRoot = el<HTMLElement>("gallery");
  const outlineRoot = el<HTMLElement>("outline");
  const status = el<HTMLElement>("status");

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    try {
      const baseUrl = el<HTMLInputElement>("service-url").value.replace(/\/$/, "");
      const datasetFile = el<HTMLInputElement>("dataset-file").files?.[0];
      const chartFiles = el<HTMLInputElement>("chart-files").files;
      if (!datasetFile || !chartFiles?.length) {
        status.textContent = "Pick a CSV dataset and at least one chart spec.";
        return;
      }
      status.textContent = "Creating session…";
      const api = new ApiClient(baseUrl);
      await api.createSession();

      const outline = new OutlinePanel(outlineRoot, api);
      const gallery = new FactCardGallery(galleryRoot, api, {
        onOutline: (o) => outline.setOutline(o),
      });

      await api.addDatasetCsv(
        await datasetFile.text(),
        datasetFile.name.replace(/\.csv$/, ""),
      );
      status.textContent = "Mining charts…";
      await loadCharts(api, gallery, chartFiles);
      await outline.refresh();
      gallery.setSelection(outline.current.selected);
      status.textContent = `Session ${api.sessionId} ready.`;
    } catch (err) {
      status.textContent = err instanceof Error ? err.message : String(err);
    }
  });
}

void boot();
