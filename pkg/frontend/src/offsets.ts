// Browser selection -> character span, measured against the plain text the
// API delivered.  The document pane contains only text nodes wrapped in
// highlight spans, so concatenated text content equals the plain text and
// Range.toString() lengths are exact offsets into it.

import type { Span } from "./types.js";

export function selectionToSpan(container: Element, selection: Selection): Span | null {
  if (selection.rangeCount === 0) return null;
  const range = selection.getRangeAt(0);
  if (range.collapsed) return null;
  if (
    !container.contains(range.startContainer) ||
    !container.contains(range.endContainer)
  ) {
    return null;
  }
  const doc = container.ownerDocument;
  const before = doc.createRange();
  before.selectNodeContents(container);
  before.setEnd(range.startContainer, range.startOffset);
  const start = before.toString().length;
  const length = range.toString().length;
  if (length === 0) return null;
  return { start, end: start + length };
}
