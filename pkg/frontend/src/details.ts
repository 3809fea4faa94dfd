// Detail card rendering: one node's argument bag as an HTML fragment.

import type { DetailCard } from './types.js'

const escapes: Record<string, string> = {
  '&': '&amp;', '<': '&lt;', '>': '&gt;', '"': '&quot;', "'": '&#39;',
}

export function escapeHtml(text: string): string {
  return text.replace(/[&<>"']/g, (c) => escapes[c])
}

export function cardHtml(card: DetailCard): string {
  const title = card.label ? escapeHtml(card.label) : escapeHtml(card.node_id)
  const rows = card.arguments
    .map(
      (a) =>
        `<tr><th>${escapeHtml(a.name)}</th><td>${escapeHtml(a.text)}</td></tr>`,
    )
    .join('')
  const table = rows
    ? `<table class="card-args">${rows}</table>`
    : '<p class="card-empty">no arguments</p>'
  return (
    `<h3>${title}</h3>` +
    `<p class="card-kind">${escapeHtml(card.kind)} &middot; ${escapeHtml(card.node_id)}</p>` +
    table
  )
}
