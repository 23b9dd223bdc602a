/** The organization panel: the story outline as slides of facts.
 *
 * Slides and facts carry drag handles; dropping one issues the matching
 * move op to the service and the panel re-renders from the returned
 * outline, so the displayed order is always the server-confirmed order.
 * Titles are editable in place, a per-fact gear menu offers "new slide"
 * (split) and "remove from story", and the export control downloads the
 * deck in the chosen format.
 */

import type { ApiClient } from "./api.js";
import type { ExportFormat, Outline } from "./types.js";

const CHART_GLYPHS: Record<string, string> = {
  bar: "▮",
  line: "⟋",
  area: "◢",
  point: "∴",
  arc: "◔",
};

export interface OutlineOptions {
  /** Called with the fresh outline after any edit. */
  onOutline?: (outline: Outline) => void;
  /** File-download hook; the default creates a blob link and clicks it. */
  download?: (filename: string, content: string, mediaType: string) => void;
}

const MEDIA_TYPES: Record<ExportFormat, string> = {
  json: "application/json",
  markdown: "text/markdown",
  html: "text/html",
};

export class OutlinePanel {
  private outline: Outline = { revision: 0, selected: [], slides: [] };
  private dragged: { kind: "slide" | "fact"; id: string } | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly options: OutlineOptions = {},
  ) {
    root.classList.add("outline-panel");
    root.addEventListener("click", (event) => void this.onClick(event));
    root.addEventListener("focusout", (event) => void this.onFocusOut(event));
    root.addEventListener("dragstart", (event) => this.onDragStart(event));
    root.addEventListener("dragover", (event) => event.preventDefault());
    root.addEventListener("drop", (event) => void this.onDrop(event));
  }

  async refresh(): Promise<void> {
    this.setOutline(await this.api.getStory());
  }

  setOutline(outline: Outline): void {
    this.outline = outline;
    this.render();
  }

  get current(): Outline {
    return this.outline;
  }

  render(): void {
    this.root.replaceChildren();

    const toolbar = document.createElement("div");
    toolbar.className = "outline-toolbar";
    const format = document.createElement("select");
    format.className = "export-format";
    for (const name of ["json", "markdown", "html"] as const) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      format.appendChild(option);
    }
    const exportButton = document.createElement("button");
    exportButton.className = "export-deck";
    exportButton.textContent = "Export";
    toolbar.append(format, exportButton);
    this.root.appendChild(toolbar);

    const list = document.createElement("ol");
    list.className = "slides";
    this.outline.slides.forEach((slide, index) => {
      const item = document.createElement("li");
      item.className = `slide${slide.pinned ? " pinned" : ""}`;
      item.dataset.slideId = slide.id;
      item.dataset.position = String(index);
      item.draggable = true;

      const header = document.createElement("div");
      header.className = "slide-header";
      const handle = document.createElement("span");
      handle.className = "drag-handle";
      handle.textContent = "⠿";
      const title = document.createElement("h3");
      title.className = "slide-title";
      title.contentEditable = "true";
      title.textContent = slide.title;
      header.append(handle, title);
      item.appendChild(header);

      const facts = document.createElement("ul");
      facts.className = "slide-facts";
      for (const fact of slide.facts) {
        const row = document.createElement("li");
        row.className = `outline-fact${fact.pinned ? " pinned" : ""}`;
        row.dataset.factId = fact.id;
        row.draggable = true;

        const glyph = document.createElement("span");
        glyph.className = "chart-glyph";
        glyph.textContent = CHART_GLYPHS[fact.chart_type] ?? "▢";
        glyph.title = `${fact.chart_type} chart (${fact.chart_id})`;
        const kind = document.createElement("span");
        kind.className = "fact-kind";
        kind.textContent = fact.fact_type;
        const text = document.createElement("span");
        text.className = "fact-text";
        text.textContent = fact.description;

        const gear = document.createElement("details");
        gear.className = "gear";
        const summary = document.createElement("summary");
        summary.textContent = "⚙";
        const menu = document.createElement("div");
        menu.className = "gear-menu";
        const split = document.createElement("button");
        split.className = "gear-split";
        split.textContent = "New slide";
        const remove = document.createElement("button");
        remove.className = "gear-remove";
        remove.textContent = "Remove from story";
        menu.append(split, remove);
        gear.append(summary, menu);

        row.append(glyph, kind, text, gear);
        facts.appendChild(row);
      }
      item.appendChild(facts);
      list.appendChild(item);
    });
    this.root.appendChild(list);
  }

  private slideOf(target: EventTarget | null): HTMLElement | null {
    return target instanceof Element ? target.closest<HTMLElement>(".slide") : null;
  }

  private async onClick(event: Event): Promise<void> {
    const target = event.target;
    if (!(target instanceof Element)) return;

    if (target.closest(".export-deck")) {
      await this.exportDeck();
      return;
    }
    const factRow = target.closest<HTMLElement>(".outline-fact");
    if (factRow?.dataset.factId) {
      if (target.closest(".gear-split")) {
        await this.apply(this.api.splitFact(factRow.dataset.factId));
      } else if (target.closest(".gear-remove")) {
        await this.apply(this.api.removeFact(factRow.dataset.factId));
      }
    }
  }

  private async onFocusOut(event: Event): Promise<void> {
    const target = event.target;
    if (!(target instanceof HTMLElement) || !target.classList.contains("slide-title")) {
      return;
    }
    const slide = this.slideOf(target);
    if (!slide?.dataset.slideId) return;
    const existing = this.outline.slides.find((s) => s.id === slide.dataset.slideId);
    const title = target.textContent ?? "";
    if (!existing || existing.title === title) return;
    await this.apply(this.api.setSlideTitle(slide.dataset.slideId, title));
  }

  private onDragStart(event: Event): void {
    const target = event.target;
    if (!(target instanceof Element)) return;
    const factRow = target.closest<HTMLElement>(".outline-fact");
    if (factRow?.dataset.factId) {
      this.dragged = { kind: "fact", id: factRow.dataset.factId };
      return;
    }
    const slide = this.slideOf(target);
    if (slide?.dataset.slideId) {
      this.dragged = { kind: "slide", id: slide.dataset.slideId };
    }
  }

  private async onDrop(event: Event): Promise<void> {
    event.preventDefault();
    const dragged = this.dragged;
    this.dragged = null;
    if (!dragged) return;
    const slide = this.slideOf(event.target);
    if (!slide?.dataset.slideId) return;
    const targetSlideId = slide.dataset.slideId;

    if (dragged.kind === "slide") {
      if (dragged.id === targetSlideId) return;
      await this.apply(this.api.moveSlide(dragged.id, Number(slide.dataset.position)));
      return;
    }
    const factRow =
      event.target instanceof Element
        ? event.target.closest<HTMLElement>(".outline-fact")
        : null;
    const targetSlide = this.outline.slides.find((s) => s.id === targetSlideId);
    const position = factRow?.dataset.factId
      ? Math.max(0, targetSlide?.facts.findIndex((f) => f.id === factRow.dataset.factId) ?? 0)
      : (targetSlide?.facts.length ?? 0);
    await this.apply(this.api.moveFact(dragged.id, targetSlideId, position));
  }

  private async apply(call: Promise<Outline>): Promise<void> {
    try {
      this.setOutline(await call);
      this.options.onOutline?.(this.outline);
    } catch (err) {
      const note = document.createElement("p");
      note.className = "outline-error";
      note.textContent = err instanceof Error ? err.message : String(err);
      this.root.prepend(note);
    }
  }

  private async exportDeck(): Promise<void> {
    const format =
      (this.root.querySelector<HTMLSelectElement>(".export-format")?.value as ExportFormat) ??
      "json";
    const content = await this.api.exportDeck(format);
    const extension = format === "markdown" ? "md" : format;
    const download = this.options.download ?? defaultDownload;
    download(`storydeck.${extension}`, content, MEDIA_TYPES[format]);
  }
}

function defaultDownload(filename: string, content: string, mediaType: string): void {
  const blob = new Blob([content], { type: mediaType });
  const url = URL.createObjectURL(blob);
  const link = document.createElement("a");
  link.href = url;
  link.download = filename;
  link.click();
  URL.revokeObjectURL(url);
}
